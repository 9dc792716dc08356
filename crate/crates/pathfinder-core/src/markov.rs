//! Four-state availability chain for a weather-impacted departure fix.
//!
//! States, in row order: 0 Gate Closed, 1 Pathfinder Selection,
//! 2 Pathfinding, 3 Gate Opened. Three probabilities parameterize every
//! transition: weather improvement, offer acceptance, and pathfinding
//! success. The stationary distribution is obtained by a dense linear solve
//! of the balance equations with the normalization row substituted in; the
//! open-state occupancy then feeds an M/M/1-style capacity and delay
//! approximation.

use rayon::prelude::*;
use thiserror::Error;

use crate::numfmt::sig12;

pub const STATE_COUNT: usize = 4;

/// Human-readable state names, indexed like the matrix rows.
pub const STATE_NAMES: [&str; STATE_COUNT] = [
    "gate_closed",
    "pathfinder_selection",
    "pathfinding",
    "gate_opened",
];

#[derive(Debug, Error, PartialEq)]
pub enum MarkovError {
    #[error("{field} must lie in [0,1], got {value}")]
    ProbabilityRange { field: &'static str, value: f64 },
    #[error("matrix row {row} sums to {sum}, not 1")]
    NotStochastic { row: usize, sum: f64 },
    #[error("chain has multiple recurrent classes reachable from state 0")]
    AmbiguousRecurrence,
    #[error("queue model invalid: {0}")]
    QueueModel(String),
    #[error("linear system is singular")]
    Singular,
}

/// The three transition probabilities of the availability chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovParams {
    pub p_good: f64,
    pub p_accept: f64,
    pub p_success: f64,
}

impl MarkovParams {
    pub fn new(p_good: f64, p_accept: f64, p_success: f64) -> Result<Self, MarkovError> {
        let params = Self {
            p_good,
            p_accept,
            p_success,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), MarkovError> {
        for (field, value) in [
            ("p_good", self.p_good),
            ("p_accept", self.p_accept),
            ("p_success", self.p_success),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(MarkovError::ProbabilityRange { field, value });
            }
        }
        Ok(())
    }

    /// True when any probability sits at 0 or 1; such chains may be
    /// reducible and their stationary solution is flagged accordingly.
    pub fn has_endpoint(&self) -> bool {
        [self.p_good, self.p_accept, self.p_success]
            .iter()
            .any(|&p| p == 0.0 || p == 1.0)
    }
}

/// Row-stochastic 4×4 transition matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionMatrix {
    rows: [[f64; STATE_COUNT]; STATE_COUNT],
}

impl TransitionMatrix {
    pub fn rows(&self) -> &[[f64; STATE_COUNT]; STATE_COUNT] {
        &self.rows
    }

    pub fn validate_stochastic(&self) -> Result<(), MarkovError> {
        for (i, row) in self.rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 || row.iter().any(|&p| !(0.0..=1.0 + 1e-12).contains(&p)) {
                return Err(MarkovError::NotStochastic { row: i, sum });
            }
        }
        Ok(())
    }
}

/// Builds the transition matrix from the three probabilities.
pub fn build_transition(params: &MarkovParams) -> Result<TransitionMatrix, MarkovError> {
    params.validate()?;
    let g = params.p_good;
    let a = params.p_accept;
    let s = params.p_success;
    Ok(TransitionMatrix {
        rows: [
            [1.0 - g, g, 0.0, 0.0],
            [0.0, 1.0 - a, a, 0.0],
            [1.0 - s, 0.0, 0.0, s],
            [1.0 - g, 0.0, 0.0, g],
        ],
    })
}

/// Stationary occupancy of the four states.
///
/// `ergodic` is false when the chain restricted to the states reachable
/// from Gate Closed is not a single recurrent class over all four states;
/// in that case `pi` concentrates on the reachable recurrent class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryDistribution {
    pub pi: [f64; STATE_COUNT],
    pub ergodic: bool,
}

/// Solves `πP = π, Σπ = 1` for the recurrent class reachable from state 0.
pub fn stationary(matrix: &TransitionMatrix) -> Result<StationaryDistribution, MarkovError> {
    matrix.validate_stochastic()?;
    let rows = matrix.rows();
    let reach_from = |start: usize| -> [bool; STATE_COUNT] {
        let mut seen = [false; STATE_COUNT];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(s) = stack.pop() {
            for t in 0..STATE_COUNT {
                if rows[s][t] > 0.0 && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen
    };

    let closures: Vec<[bool; STATE_COUNT]> = (0..STATE_COUNT).map(reach_from).collect();
    let reachable = closures[0];
    // A state is recurrent when it communicates with everything it reaches.
    let mut class: Option<Vec<usize>> = None;
    for s in 0..STATE_COUNT {
        if !reachable[s] {
            continue;
        }
        let recurrent = (0..STATE_COUNT).all(|t| !closures[s][t] || closures[t][s]);
        if recurrent {
            let members: Vec<usize> = (0..STATE_COUNT).filter(|&t| closures[s][t]).collect();
            match &class {
                None => class = Some(members),
                Some(existing) if *existing == members => {}
                Some(_) => return Err(MarkovError::AmbiguousRecurrence),
            }
        }
    }
    let class = class.ok_or(MarkovError::AmbiguousRecurrence)?;
    let k = class.len();

    let mut pi = [0.0; STATE_COUNT];
    if k == 1 {
        pi[class[0]] = 1.0;
    } else {
        // Balance equations of the restricted chain, transposed, with the
        // last row replaced by the normalization condition.
        let mut a = vec![vec![0.0_f64; k]; k];
        let mut b = vec![0.0_f64; k];
        for (r, &sr) in class.iter().enumerate() {
            for (c, &sc) in class.iter().enumerate() {
                a[r][c] = rows[sc][sr] - if r == c { 1.0 } else { 0.0 };
            }
        }
        for c in 0..k {
            a[k - 1][c] = 1.0;
        }
        b[k - 1] = 1.0;
        let x = solve_dense(&mut a, &mut b)?;
        for (idx, &s) in class.iter().enumerate() {
            // Tiny negative round-off is clipped; the residual checks in the
            // test suite bound how much this can matter.
            pi[s] = x[idx].max(0.0);
        }
    }
    Ok(StationaryDistribution {
        pi,
        ergodic: k == STATE_COUNT,
    })
}

/// Gaussian elimination with partial pivoting on a small dense system.
fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Result<Vec<f64>, MarkovError> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[pivot][col].abs() < 1e-300 {
            return Err(MarkovError::Singular);
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for c in row + 1..n {
            acc -= a[row][c] * x[c];
        }
        x[row] = acc / a[row][row];
    }
    Ok(x)
}

/// Departure demand and per-period capacity for the queueing abstraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueModel {
    /// Departures served per decision period while the fix is open.
    pub c: f64,
    /// Arrival rate of ready-to-depart flights, per period.
    pub lambda_dep: f64,
}

impl QueueModel {
    pub fn validate(&self) -> Result<(), MarkovError> {
        if !(self.c > 0.0) {
            return Err(MarkovError::QueueModel(format!(
                "c must be positive, got {}",
                self.c
            )));
        }
        if self.lambda_dep < 0.0 || self.lambda_dep.is_nan() {
            return Err(MarkovError::QueueModel(format!(
                "lambda_dep must be non-negative, got {}",
                self.lambda_dep
            )));
        }
        Ok(())
    }
}

/// Usable departure capacity: per-period service count scaled by the
/// long-run open-state occupancy.
pub fn effective_service_rate(pi: &StationaryDistribution, queue: &QueueModel) -> f64 {
    queue.c * pi.pi[3]
}

/// Mean wait / queue length, or an explicit marker when the queue diverges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delay {
    Bounded(f64),
    Unbounded,
}

impl Delay {
    pub fn bounded(&self) -> Option<f64> {
        match self {
            Delay::Bounded(v) => Some(*v),
            Delay::Unbounded => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayMetrics {
    pub stable: bool,
    /// Mean time in system, in decision periods.
    pub wait: Delay,
    /// Mean number in system.
    pub queue_len: Delay,
}

/// Single-server delay approximation: stable iff demand is below the
/// effective rate, with `W = 1/(μ_eff − λ)` and `L = λW` when stable.
pub fn stability_and_delay(queue: &QueueModel, mu_eff: f64) -> DelayMetrics {
    let lambda = queue.lambda_dep;
    if lambda < mu_eff {
        let w = 1.0 / (mu_eff - lambda);
        DelayMetrics {
            stable: true,
            wait: Delay::Bounded(w),
            queue_len: Delay::Bounded(lambda * w),
        }
    } else {
        DelayMetrics {
            stable: false,
            wait: Delay::Unbounded,
            queue_len: Delay::Unbounded,
        }
    }
}

/// One grid point of a stationary-distribution sweep.
#[derive(Debug, Clone, Copy)]
pub struct SweepRow {
    pub params: MarkovParams,
    pub dist: StationaryDistribution,
}

/// Evaluates the stationary distribution over the Cartesian grid, rows
/// ordered lexicographically by (p_good, p_accept, p_success) index.
pub fn sweep_stationary(
    p_good: &[f64],
    p_accept: &[f64],
    p_success: &[f64],
) -> Result<Vec<SweepRow>, MarkovError> {
    for &v in p_good.iter().chain(p_accept).chain(p_success) {
        if !(0.0..=1.0).contains(&v) {
            return Err(MarkovError::ProbabilityRange {
                field: "grid value",
                value: v,
            });
        }
    }
    let mut points = Vec::new();
    for &g in p_good {
        for &a in p_accept {
            for &s in p_success {
                points.push(MarkovParams {
                    p_good: g,
                    p_accept: a,
                    p_success: s,
                });
            }
        }
    }
    points
        .into_par_iter()
        .map(|params| {
            let dist = stationary(&build_transition(&params)?)?;
            Ok(SweepRow { params, dist })
        })
        .collect()
}

/// CSV emission for sweep rows: `p_good,p_accept,p_success,pi0,pi1,pi2,pi3`.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p_good,p_accept,p_success,pi0,pi1,pi2,pi3\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            sig12(row.params.p_good),
            sig12(row.params.p_accept),
            sig12(row.params.p_success),
            sig12(row.dist.pi[0]),
            sig12(row.dist.pi[1]),
            sig12(row.dist.pi[2]),
            sig12(row.dist.pi[3]),
        ));
    }
    out
}
