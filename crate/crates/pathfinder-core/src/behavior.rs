//! Stakeholder utility models and the logistic acceptance rule.
//!
//! A flight weighs a departure reward against participation and failure
//! costs; its accept/decline choice is randomized through a logistic map of
//! that utility. ATC and dispatcher utilities are expected net gains that
//! trade a benefit term against a penalty term scaled by a weight.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BehaviorError {
    #[error("{field} must be non-negative, got {value}")]
    Negative { field: &'static str, value: f64 },
    #[error("p_success must lie in [0,1], got {0}")]
    ProbabilityRange(f64),
}

/// Parameters of a single flight's participation decision.
///
/// Declining carries no cost or reward: the decline branch of
/// [`flight_utility`] returns exactly zero. `beta` of zero is admitted so
/// degenerate sweep grid points stay representable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlightDecisionParams {
    pub reward_t: f64,
    pub cost_c: f64,
    pub failure_cost_d: f64,
    pub p_success: f64,
    pub beta: f64,
}

impl FlightDecisionParams {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        for (field, value) in [
            ("reward_T", self.reward_t),
            ("cost_c", self.cost_c),
            ("failure_cost_d", self.failure_cost_d),
            ("beta", self.beta),
        ] {
            if value < 0.0 || value.is_nan() {
                return Err(BehaviorError::Negative { field, value });
            }
        }
        if !(0.0..=1.0).contains(&self.p_success) {
            return Err(BehaviorError::ProbabilityRange(self.p_success));
        }
        Ok(())
    }
}

/// Penalty weights for the ATC and dispatcher utilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StakeholderWeights {
    pub lambda_atc: f64,
    pub lambda_disp: f64,
}

impl StakeholderWeights {
    pub fn validate(&self) -> Result<(), BehaviorError> {
        for (field, value) in [
            ("lambda_atc", self.lambda_atc),
            ("lambda_disp", self.lambda_disp),
        ] {
            if value < 0.0 || value.is_nan() {
                return Err(BehaviorError::Negative { field, value });
            }
        }
        Ok(())
    }
}

/// Expected payoff of the participation decision: on acceptance the flight
/// earns the reward, pays the participation cost, and bears the failure cost
/// weighted by the miss probability; on decline the payoff is exactly zero.
pub fn flight_utility(accept: bool, params: &FlightDecisionParams) -> f64 {
    if accept {
        params.reward_t - params.cost_c - (1.0 - params.p_success) * params.failure_cost_d
    } else {
        0.0
    }
}

/// Numerically stable logistic `1 / (1 + exp(-x))`.
///
/// Split on the sign of `x` so the exponential argument is never positive;
/// products beyond several hundred neither overflow nor go NaN.
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Probability that a flight with the given utility accepts the offer.
pub fn acceptance_probability(utility: f64, beta: f64) -> f64 {
    logistic(beta * utility)
}

/// Complement of [`acceptance_probability`], computed through the mirrored
/// logistic rather than `1 - p` to keep tails exact.
pub fn rejection_probability(utility: f64, beta: f64) -> f64 {
    logistic(-beta * utility)
}

/// Expected net gain to ATC of offering to this flight: acceptance
/// probability times delay savings net of the weighted operational burden.
pub fn atc_utility(
    p_accept: f64,
    delta_d_sys: f64,
    g_atc: f64,
    weights: &StakeholderWeights,
) -> f64 {
    p_accept * (delta_d_sys - weights.lambda_atc * g_atc)
}

/// Dispatcher counterpart of [`atc_utility`] with airline benefit and
/// dispatcher-perceived risk.
pub fn dispatcher_utility(
    p_accept: f64,
    b_dep: f64,
    g_disp: f64,
    weights: &StakeholderWeights,
) -> f64 {
    p_accept * (b_dep - weights.lambda_disp * g_disp)
}
