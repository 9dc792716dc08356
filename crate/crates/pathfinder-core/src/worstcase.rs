//! Collective-rejection analysis.
//!
//! The population splits into a rejective share `α` with utility `U⁻ < 0`
//! and a receptive share with `U⁺ > 0`. The probability that all `n`
//! flights decline collapses, by the binomial theorem, to a mixture raised
//! to the n-th power; the tipping point `α*` is where that probability hits
//! the tolerance `δ`. Extensions shift utilities for selfless behavior or
//! average over a shared noise realization, with sensitivities obtained by
//! finite differences and the implicit-function ratio.

use rayon::prelude::*;
use thiserror::Error;

use crate::behavior::rejection_probability;
use crate::numfmt::sig12;
use crate::quadrature::gauss_hermite;

/// Default node count for the Gaussian-noise quadrature.
pub const DEFAULT_GH_NODES: usize = 64;

/// Gradients within this band of zero count as flat, not negative.
pub const GRADIENT_ZERO_BAND: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum WorstCaseError {
    #[error("population invalid: {0}")]
    Population(String),
    #[error("{field} out of range: {value}")]
    Range { field: &'static str, value: f64 },
    #[error("rejective and receptive probabilities coincide")]
    DegenerateTypes,
    #[error("no tipping point in [0,1]: W(0)={w_low}, W(1)={w_high}, delta={delta}")]
    NoRoot { w_low: f64, w_high: f64, delta: f64 },
}

/// Two-type flight population facing a pathfinder offer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationModel {
    pub n: u32,
    /// Fraction of the population that is rejective.
    pub alpha: f64,
    pub u_minus: f64,
    pub u_plus: f64,
    pub beta: f64,
}

impl PopulationModel {
    pub fn new(n: u32, alpha: f64, u_minus: f64, u_plus: f64, beta: f64) -> Result<Self, WorstCaseError> {
        let pop = Self {
            n,
            alpha,
            u_minus,
            u_plus,
            beta,
        };
        pop.validate()?;
        Ok(pop)
    }

    pub fn validate(&self) -> Result<(), WorstCaseError> {
        if self.n < 1 {
            return Err(WorstCaseError::Population("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(WorstCaseError::Range {
                field: "alpha",
                value: self.alpha,
            });
        }
        if !(self.u_minus < 0.0) || !(self.u_plus > 0.0) {
            return Err(WorstCaseError::Population(format!(
                "need u_minus < 0 < u_plus, got {} and {}",
                self.u_minus, self.u_plus
            )));
        }
        if !(self.beta > 0.0) {
            return Err(WorstCaseError::Range {
                field: "beta",
                value: self.beta,
            });
        }
        Ok(())
    }

    /// Rejection probability of the rejective type (above one half).
    pub fn p_rejective(&self) -> f64 {
        rejection_probability(self.u_minus, self.beta)
    }

    /// Rejection probability of the receptive type (below one half).
    pub fn p_receptive(&self) -> f64 {
        rejection_probability(self.u_plus, self.beta)
    }
}

/// Selflessness extension: utilities gain `(1 - S)·γ·R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelflessParams {
    pub s: f64,
    pub gamma: f64,
    pub r: f64,
}

impl SelflessParams {
    pub fn validate(&self) -> Result<(), WorstCaseError> {
        if !(0.0..=1.0).contains(&self.s) {
            return Err(WorstCaseError::Range {
                field: "s",
                value: self.s,
            });
        }
        if !(self.gamma > 0.0) {
            return Err(WorstCaseError::Range {
                field: "gamma",
                value: self.gamma,
            });
        }
        if self.r < 0.0 || self.r.is_nan() {
            return Err(WorstCaseError::Range {
                field: "r",
                value: self.r,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    Gaussian,
    Rademacher,
}

impl NoiseKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::Rademacher => "rademacher",
        }
    }
}

impl std::str::FromStr for NoiseKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => Ok(NoiseKind::Gaussian),
            "rademacher" => Ok(NoiseKind::Rademacher),
            other => Err(format!("unknown noise kind '{other}'")),
        }
    }
}

/// Shared zero-mean disturbance applied to every flight's utility.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub theta: f64,
}

impl NoiseSpec {
    pub fn validate(&self) -> Result<(), WorstCaseError> {
        if self.theta < 0.0 || self.theta.is_nan() {
            return Err(WorstCaseError::Range {
                field: "theta",
                value: self.theta,
            });
        }
        Ok(())
    }
}

/// Maximum tolerable probability of complete rejection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub delta: f64,
}

impl Tolerance {
    pub fn new(delta: f64) -> Result<Self, WorstCaseError> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(WorstCaseError::Range {
                field: "delta",
                value: delta,
            });
        }
        Ok(Self { delta })
    }
}

/// Mixture rejection probability at a common utility shift, raised to n.
fn w_shifted_at(pop: &PopulationModel, alpha: f64, shift: f64) -> f64 {
    let p_rej = rejection_probability(pop.u_minus + shift, pop.beta);
    let p_rec = rejection_probability(pop.u_plus + shift, pop.beta);
    let mix = alpha * p_rej + (1.0 - alpha) * p_rec;
    mix.powi(pop.n as i32)
}

/// Probability that all n independent flights decline.
pub fn w_baseline(pop: &PopulationModel) -> f64 {
    w_shifted_at(pop, pop.alpha, 0.0)
}

/// Tipping point `α*` with the closed form clamped into [0,1] when the
/// tolerance falls outside the attainable range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaStar {
    pub alpha: f64,
    pub raw: f64,
    pub clamped: bool,
}

/// Closed-form rejective-share threshold where `W(α*) = δ`.
pub fn alpha_star(pop: &PopulationModel, tol: &Tolerance) -> Result<AlphaStar, WorstCaseError> {
    let p_rej = pop.p_rejective();
    let p_rec = pop.p_receptive();
    if p_rej <= p_rec {
        return Err(WorstCaseError::DegenerateTypes);
    }
    let raw = (tol.delta.powf(1.0 / pop.n as f64) - p_rec) / (p_rej - p_rec);
    let alpha = raw.clamp(0.0, 1.0);
    Ok(AlphaStar {
        alpha,
        raw,
        clamped: raw != alpha,
    })
}

/// Collective-rejection probability when flights internalize part of the
/// system rejection risk: both utilities shift by `(1 - S)·γ·R`.
pub fn w_selfless(pop: &PopulationModel, selfless: &SelflessParams) -> f64 {
    let shift = (1.0 - selfless.s) * selfless.gamma * selfless.r;
    w_shifted_at(pop, pop.alpha, shift)
}

fn w_noise_at(pop: &PopulationModel, alpha: f64, noise: &NoiseSpec, gh_nodes: usize) -> f64 {
    if noise.theta == 0.0 {
        // Degenerate noise is a point mass at zero.
        return w_shifted_at(pop, alpha, 0.0);
    }
    match noise.kind {
        NoiseKind::Rademacher => {
            0.5 * (w_shifted_at(pop, alpha, noise.theta) + w_shifted_at(pop, alpha, -noise.theta))
        }
        NoiseKind::Gaussian => {
            let rule = gauss_hermite(gh_nodes);
            let scale = std::f64::consts::SQRT_2 * noise.theta;
            let sum: f64 = rule
                .iter()
                .map(|&(t, w)| w * w_shifted_at(pop, alpha, scale * t))
                .sum();
            sum / std::f64::consts::PI.sqrt()
        }
    }
}

/// Worst-case probability under a shared noise realization: the expectation
/// is taken outside the n-th power, one draw perturbing every flight alike.
pub fn w_noise(pop: &PopulationModel, noise: &NoiseSpec) -> f64 {
    w_noise_with_nodes(pop, noise, DEFAULT_GH_NODES)
}

/// [`w_noise`] with a configurable Gauss–Hermite node count.
pub fn w_noise_with_nodes(pop: &PopulationModel, noise: &NoiseSpec, gh_nodes: usize) -> f64 {
    w_noise_at(pop, pop.alpha, noise, gh_nodes)
}

/// Finite-difference derivative estimate; `one_sided` marks boundary cases
/// where the central stencil would leave the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradEstimate {
    pub value: f64,
    pub one_sided: bool,
}

fn fd_step(at: f64) -> f64 {
    1e-5 * at.abs().max(1.0)
}

/// `∂W/∂θ` by central differences (forward at the θ = 0 boundary).
pub fn grad_w_theta(pop: &PopulationModel, noise: &NoiseSpec) -> GradEstimate {
    grad_w_theta_with_nodes(pop, noise, DEFAULT_GH_NODES)
}

pub fn grad_w_theta_with_nodes(
    pop: &PopulationModel,
    noise: &NoiseSpec,
    gh_nodes: usize,
) -> GradEstimate {
    let h = fd_step(noise.theta);
    let at = |theta: f64| {
        w_noise_at(
            pop,
            pop.alpha,
            &NoiseSpec {
                kind: noise.kind,
                theta,
            },
            gh_nodes,
        )
    };
    if noise.theta >= h {
        GradEstimate {
            value: (at(noise.theta + h) - at(noise.theta - h)) / (2.0 * h),
            one_sided: false,
        }
    } else {
        GradEstimate {
            value: (at(noise.theta + h) - at(noise.theta)) / h,
            one_sided: true,
        }
    }
}

/// Tipping point under noise, located by bisection on `α` (W is strictly
/// increasing in `α`), to `|W - δ| ≤ 1e-10`.
pub fn alpha_star_noise(
    pop: &PopulationModel,
    noise: &NoiseSpec,
    tol: &Tolerance,
) -> Result<f64, WorstCaseError> {
    alpha_star_noise_with_nodes(pop, noise, tol, DEFAULT_GH_NODES)
}

pub fn alpha_star_noise_with_nodes(
    pop: &PopulationModel,
    noise: &NoiseSpec,
    tol: &Tolerance,
    gh_nodes: usize,
) -> Result<f64, WorstCaseError> {
    let w_low = w_noise_at(pop, 0.0, noise, gh_nodes);
    let w_high = w_noise_at(pop, 1.0, noise, gh_nodes);
    if !(w_low < tol.delta && tol.delta < w_high) {
        return Err(WorstCaseError::NoRoot {
            w_low,
            w_high,
            delta: tol.delta,
        });
    }
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut mid = 0.5;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let w = w_noise_at(pop, mid, noise, gh_nodes);
        if (w - tol.delta).abs() <= 1e-10 {
            return Ok(mid);
        }
        if w < tol.delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// `dα*/dθ` via the implicit-function ratio `-(∂W/∂θ)/(∂W/∂α)`, both
/// partials by the same central-difference policy.
pub fn d_alpha_d_theta(
    pop: &PopulationModel,
    noise: &NoiseSpec,
    tol: &Tolerance,
) -> Result<f64, WorstCaseError> {
    let gh_nodes = DEFAULT_GH_NODES;
    let astar = alpha_star_noise_with_nodes(pop, noise, tol, gh_nodes)?;
    let at_alpha = PopulationModel {
        alpha: astar,
        ..*pop
    };
    let d_theta = grad_w_theta_with_nodes(&at_alpha, noise, gh_nodes).value;
    let h = fd_step(astar);
    // The mixture power is analytic in alpha, so the stencil may step
    // slightly outside [0,1].
    let d_alpha = (w_noise_at(pop, astar + h, noise, gh_nodes)
        - w_noise_at(pop, astar - h, noise, gh_nodes))
        / (2.0 * h);
    Ok(-d_theta / d_alpha)
}

/// Population family for gradient maps: symmetric utilities `±|U|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PopulationFamily {
    pub n: u32,
    pub abs_u: f64,
    pub beta: f64,
}

/// Evaluation grid over `(α, θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientGrid {
    pub alphas: Vec<f64>,
    pub thetas: Vec<f64>,
}

impl GradientGrid {
    /// 101×101 grid over `[0,1] × [0, 10]`.
    pub fn default_map() -> Self {
        Self::linspace(101, 101, 10.0)
    }

    pub fn linspace(alpha_cells: usize, theta_cells: usize, theta_max: f64) -> Self {
        let lin = |count: usize, max: f64| -> Vec<f64> {
            if count == 1 {
                vec![0.0]
            } else {
                (0..count)
                    .map(|i| max * i as f64 / (count - 1) as f64)
                    .collect()
            }
        };
        Self {
            alphas: lin(alpha_cells, 1.0),
            thetas: lin(theta_cells, theta_max),
        }
    }
}

/// Fraction of grid cells where `∂W/∂θ < -1e-12`.
///
/// Cells at `θ = 0` count as flat: the curve starts level there (the
/// first-order term of the expectation vanishes at zero scale), so the
/// one-sided stencil's discretization noise is not read as structure.
pub fn negative_gradient_fraction(
    family: &PopulationFamily,
    grid: &GradientGrid,
    kind: NoiseKind,
    gh_nodes: usize,
) -> Result<f64, WorstCaseError> {
    if grid.alphas.is_empty() || grid.thetas.is_empty() {
        return Err(WorstCaseError::Population("empty gradient grid".into()));
    }
    let pop = PopulationModel::new(family.n, 0.0, -family.abs_u, family.abs_u, family.beta)?;
    let cells: Vec<(f64, f64)> = grid
        .alphas
        .iter()
        .flat_map(|&a| grid.thetas.iter().map(move |&t| (a, t)))
        .collect();
    let negatives: usize = cells
        .par_iter()
        .map(|&(alpha, theta)| {
            if theta == 0.0 {
                return 0;
            }
            let cell_pop = PopulationModel { alpha, ..pop };
            let spec = NoiseSpec { kind, theta };
            let g = grad_w_theta_with_nodes(&cell_pop, &spec, gh_nodes);
            usize::from(g.value < -GRADIENT_ZERO_BAND)
        })
        .sum();
    Ok(negatives as f64 / cells.len() as f64)
}

/// CSV row set for gradient maps: `n,abs_u,kind,fraction`.
pub fn fraction_map_to_csv(rows: &[(PopulationFamily, NoiseKind, f64)]) -> String {
    let mut out = String::from("n,abs_u,kind,fraction\n");
    for (family, kind, fraction) in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            family.n,
            sig12(family.abs_u),
            kind.as_str(),
            sig12(*fraction)
        ));
    }
    out
}

/// CSV for a `W(α)` curve: `alpha,w`.
pub fn curve_to_csv(points: &[(f64, f64)], x_name: &str, y_name: &str) -> String {
    let mut out = format!("{x_name},{y_name}\n");
    for &(x, y) in points {
        out.push_str(&format!("{},{}\n", sig12(x), sig12(y)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pop(n: u32, alpha: f64) -> PopulationModel {
        PopulationModel::new(n, alpha, -2.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn baseline_matches_closed_form() {
        // All rejective: mixture collapses to p_rejective^n.
        let p = pop(10, 1.0);
        let want = rejection_probability(-2.0, 1.0).powi(10);
        assert!((w_baseline(&p) - want).abs() < 1e-15);
        // Near-indifferent population tends to 0.5^n.
        let tiny = PopulationModel::new(4, 0.3, -1e-14, 1e-14, 1.0).unwrap();
        assert!((w_baseline(&tiny) - 0.5f64.powi(4)).abs() < 1e-12);
    }

    #[test]
    fn tipping_point_anchor() {
        // Reference scenario: the threshold lands just below 0.887.
        let p = pop(10, 0.5);
        let tol = Tolerance::new(0.1).unwrap();
        let a = alpha_star(&p, &tol).unwrap();
        assert!(!a.clamped);
        assert!((a.alpha - 0.886).abs() < 1e-3, "got {}", a.alpha);
        // Consistency: W at the threshold equals delta.
        let at = PopulationModel { alpha: a.alpha, ..p };
        assert!((w_baseline(&at) - 0.1).abs() < 1e-10);
    }

    #[test]
    fn tipping_point_endpoints() {
        let p = pop(10, 0.5);
        let d_low = w_baseline(&PopulationModel { alpha: 0.0, ..p });
        let a = alpha_star(&p, &Tolerance::new(d_low).unwrap()).unwrap();
        assert!(a.alpha.abs() < 1e-9);
        let d_high = w_baseline(&PopulationModel { alpha: 1.0, ..p });
        let a = alpha_star(&p, &Tolerance::new(d_high).unwrap()).unwrap();
        assert!((a.alpha - 1.0).abs() < 1e-9);
        // Out-of-range tolerance clamps and flags.
        let a = alpha_star(&p, &Tolerance::new(d_low * 0.5).unwrap()).unwrap();
        assert!(a.clamped && a.alpha == 0.0 && a.raw < 0.0);
    }

    #[test]
    fn selfless_reductions_and_shift() {
        let p = pop(10, 0.5);
        let fully_selfish = SelflessParams {
            s: 1.0,
            gamma: 2.5,
            r: 0.5,
        };
        assert_eq!(w_selfless(&p, &fully_selfish), w_baseline(&p));
        let zero_gamma_like = SelflessParams {
            s: 0.0,
            gamma: 1e-300,
            r: 0.0,
        };
        assert_eq!(w_selfless(&p, &zero_gamma_like), w_baseline(&p));
        // S=0, gamma=2.5, R=0.5: utilities shift to -0.75 / +3.25.
        let selfless = SelflessParams {
            s: 0.0,
            gamma: 2.5,
            r: 0.5,
        };
        let got = w_selfless(&p, &selfless);
        let mix = 0.5 * rejection_probability(-0.75, 1.0) + 0.5 * rejection_probability(3.25, 1.0);
        assert!((got - mix.powi(10)).abs() < 1e-15);
        assert!(got < w_baseline(&p));
    }

    #[test]
    fn noise_reductions_and_two_point_form() {
        let p = pop(10, 0.5);
        for kind in [NoiseKind::Gaussian, NoiseKind::Rademacher] {
            let spec = NoiseSpec { kind, theta: 0.0 };
            assert_eq!(w_noise(&p, &spec), w_baseline(&p));
        }
        // Rademacher with kappa=1 at alpha=0 is the plain two-point average.
        let p2 = PopulationModel::new(2, 0.0, -2.0, 2.0, 1.0).unwrap();
        let spec = NoiseSpec {
            kind: NoiseKind::Rademacher,
            theta: 1.0,
        };
        let want = 0.5
            * (rejection_probability(3.0, 1.0).powi(2) + rejection_probability(1.0, 1.0).powi(2));
        assert!((w_noise(&p2, &spec) - want).abs() < 1e-15);
    }

    #[test]
    fn gaussian_quadrature_within_node_range() {
        let p = pop(10, 0.5);
        let spec = NoiseSpec {
            kind: NoiseKind::Gaussian,
            theta: 1.0,
        };
        let w = w_noise(&p, &spec);
        assert!(w > 0.0 && w < 1.0);
        // Integrand bounds: the quadrature average cannot leave the range of
        // the mixture power over the node set.
        let rule = gauss_hermite(DEFAULT_GH_NODES);
        let scale = std::f64::consts::SQRT_2;
        let values: Vec<f64> = rule
            .iter()
            .map(|&(t, _)| {
                let shift = scale * t;
                let mix = 0.5 * rejection_probability(-2.0 + shift, 1.0)
                    + 0.5 * rejection_probability(2.0 + shift, 1.0);
                mix.powi(10)
            })
            .collect();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert!(w >= lo - 1e-12 && w <= hi + 1e-12);
    }

    #[test]
    fn gradient_boundary_is_flagged() {
        let p = pop(10, 0.5);
        let g = grad_w_theta(
            &p,
            &NoiseSpec {
                kind: NoiseKind::Gaussian,
                theta: 0.0,
            },
        );
        assert!(g.one_sided);
        let g = grad_w_theta(
            &p,
            &NoiseSpec {
                kind: NoiseKind::Rademacher,
                theta: 2.0,
            },
        );
        assert!(!g.one_sided);
    }

    #[test]
    fn alpha_star_noise_reduces_to_closed_form() {
        let p = pop(10, 0.5);
        let tol = Tolerance::new(0.1).unwrap();
        for kind in [NoiseKind::Gaussian, NoiseKind::Rademacher] {
            let spec = NoiseSpec { kind, theta: 0.0 };
            let a = alpha_star_noise(&p, &spec, &tol).unwrap();
            let closed = alpha_star(&p, &tol).unwrap().alpha;
            assert!((a - closed).abs() < 1e-8, "{kind:?}: {a} vs {closed}");
        }
    }

    #[test]
    fn alpha_star_noise_no_root() {
        let p = pop(10, 0.5);
        let spec = NoiseSpec {
            kind: NoiseKind::Rademacher,
            theta: 0.5,
        };
        let w_high = w_noise_at(&p, 1.0, &spec, 8);
        let err = alpha_star_noise(&p, &spec, &Tolerance::new((w_high + 1.0) / 2.0).unwrap())
            .unwrap_err();
        assert!(matches!(err, WorstCaseError::NoRoot { .. }));
    }

    #[test]
    fn ift_sign_identity() {
        let p = pop(10, 0.5);
        let tol = Tolerance::new(0.1).unwrap();
        for kind in [NoiseKind::Gaussian, NoiseKind::Rademacher] {
            for theta in [0.5, 2.0, 5.0] {
                let spec = NoiseSpec { kind, theta };
                let Ok(astar) = alpha_star_noise(&p, &spec, &tol) else {
                    continue;
                };
                let at = PopulationModel { alpha: astar, ..p };
                let g_theta = grad_w_theta(&at, &spec).value;
                let d = d_alpha_d_theta(&p, &spec, &tol).unwrap();
                if g_theta.abs() > 1e-9 {
                    assert!(
                        d.signum() == -g_theta.signum(),
                        "{kind:?} theta={theta}: d={d}, gradW={g_theta}"
                    );
                }
            }
        }
    }

    #[test]
    fn toy_fraction_matches_hand_count() {
        let family = PopulationFamily {
            n: 2,
            abs_u: 6.0,
            beta: 1.0,
        };
        let grid = GradientGrid {
            alphas: vec![0.2, 0.95],
            thetas: vec![1.0, 4.0],
        };
        // Count the negative cells directly with the same stencil.
        let mut hand = 0;
        for &alpha in &grid.alphas {
            for &theta in &grid.thetas {
                let p = PopulationModel::new(2, alpha, -6.0, 6.0, 1.0).unwrap();
                let g = grad_w_theta_with_nodes(
                    &p,
                    &NoiseSpec {
                        kind: NoiseKind::Rademacher,
                        theta,
                    },
                    DEFAULT_GH_NODES,
                );
                if g.value < -GRADIENT_ZERO_BAND {
                    hand += 1;
                }
            }
        }
        let frac = negative_gradient_fraction(
            &family,
            &grid,
            NoiseKind::Rademacher,
            DEFAULT_GH_NODES,
        )
        .unwrap();
        assert_eq!(frac, hand as f64 / 4.0);
    }

    #[test]
    fn zero_theta_grid_is_flat() {
        let family = PopulationFamily {
            n: 5,
            abs_u: 3.0,
            beta: 1.0,
        };
        let grid = GradientGrid {
            alphas: vec![0.0, 0.5, 1.0],
            thetas: vec![0.0],
        };
        for kind in [NoiseKind::Gaussian, NoiseKind::Rademacher] {
            let frac = negative_gradient_fraction(&family, &grid, kind, 16).unwrap();
            assert_eq!(frac, 0.0);
        }
    }

    proptest! {
        #[test]
        fn monotone_in_alpha(
            n in 1u32..20,
            a in 0.0..0.98_f64,
            um in -5.0..-0.1_f64,
            up in 0.1..5.0_f64,
            beta in 0.05..4.0_f64,
        ) {
            let p0 = PopulationModel::new(n, a, um, up, beta).unwrap();
            let p1 = PopulationModel { alpha: a + 0.02, ..p0 };
            prop_assert!(w_baseline(&p1) > w_baseline(&p0));
        }

        #[test]
        fn threshold_consistency(
            n in 1u32..15,
            um in -4.0..-0.2_f64,
            up in 0.2..4.0_f64,
            beta in 0.1..3.0_f64,
            delta in 0.01..0.99_f64,
        ) {
            let p = PopulationModel::new(n, 0.5, um, up, beta).unwrap();
            let tol = Tolerance::new(delta).unwrap();
            let a = alpha_star(&p, &tol).unwrap();
            if !a.clamped {
                let at = PopulationModel { alpha: a.alpha, ..p };
                prop_assert!((w_baseline(&at) - delta).abs() < 1e-10);
            }
        }

        #[test]
        fn selfless_never_exceeds_baseline(
            n in 1u32..15,
            a in 0.0..=1.0_f64,
            s in 0.0..1.0_f64,
            gamma in 0.01..5.0_f64,
            r in 0.0..2.0_f64,
        ) {
            let p = PopulationModel::new(n, a, -2.0, 2.0, 1.0).unwrap();
            let sp = SelflessParams { s, gamma, r };
            prop_assert!(w_selfless(&p, &sp) <= w_baseline(&p) + 1e-15);
        }

        #[test]
        fn w_stays_in_unit_interval(
            n in 1u32..25,
            a in 0.0..=1.0_f64,
            theta in 0.0..8.0_f64,
            gaussian in proptest::bool::ANY,
        ) {
            let p = PopulationModel::new(n, a, -1.5, 2.5, 0.8).unwrap();
            let kind = if gaussian { NoiseKind::Gaussian } else { NoiseKind::Rademacher };
            let w = w_noise_with_nodes(&p, &NoiseSpec { kind, theta }, 32);
            prop_assert!((0.0..=1.0).contains(&w));
        }
    }
}
