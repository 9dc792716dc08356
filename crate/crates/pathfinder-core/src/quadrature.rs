//! Gauss–Hermite nodes and weights for expectations over Gaussian noise.
//!
//! The rule integrates `∫ e^(-t²) f(t) dt`; an expectation over
//! `N(0, σ²)` follows from the change of variables `ξ = √2·σ·t` and a
//! division by `√π`. Nodes are the roots of the physicists' Hermite
//! polynomial, located by Newton iteration on the orthonormal three-term
//! recurrence (the scaled recurrence keeps intermediate values bounded for
//! large degree).

/// Nodes and weights of the `n`-point Gauss–Hermite rule, nodes ascending.
///
/// Exact for polynomial factors up to degree `2n - 1`.
pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1, "quadrature rule needs at least one node");
    let mut pairs = vec![(0.0_f64, 0.0_f64); n];
    let m = (n + 1) / 2;
    let nf = n as f64;
    let mut guesses: Vec<f64> = Vec::with_capacity(m);
    for i in 0..m {
        // Root guesses from the largest root inward (Stroud & Secrest).
        let z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => guesses[0] - 1.14 * nf.powf(0.426) / guesses[0],
            2 => 1.86 * guesses[1] - 0.86 * guesses[0],
            3 => 1.91 * guesses[2] - 0.91 * guesses[1],
            _ => 2.0 * guesses[i - 1] - guesses[i - 2],
        };
        guesses.push(z);
    }
    let pi_m4 = std::f64::consts::PI.powf(-0.25);
    for (i, &guess) in guesses.iter().enumerate() {
        let mut z = guess;
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal Hermite recurrence; p1 ends as H̃_n(z).
            let mut p1 = pi_m4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 * z.abs().max(1.0) {
                break;
            }
        }
        let w = 2.0 / (pp * pp);
        pairs[i] = (-z, w);
        pairs[n - 1 - i] = (z, w);
    }
    if n % 2 == 1 {
        pairs[n / 2].0 = 0.0;
    }
    pairs
}

/// `E[f(ξ)]` for `ξ ~ N(0, σ²)` using the supplied rule.
pub fn gaussian_expectation<F: Fn(f64) -> f64>(sigma: f64, rule: &[(f64, f64)], f: F) -> f64 {
    let scale = std::f64::consts::SQRT_2 * sigma;
    let sum: f64 = rule.iter().map(|&(t, w)| w * f(scale * t)).sum();
    sum / std::f64::consts::PI.sqrt()
}
