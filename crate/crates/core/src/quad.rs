//! Quadrature helpers: Gauss–Legendre nodes and a product rule for
//! spherical means.
//!
//! The contact-amplitude extractor averages fields over small spheres, and
//! the accuracy of that average is what limits the extractor, so the rule
//! here is chosen for exactness degree rather than node count: an
//! `n_theta`-point Gauss–Legendre rule in `cosθ` crossed with an `n_phi`
//! uniform rule in `φ` integrates every spherical harmonic of degree
//! `l ≤ min(2·n_theta − 1, n_phi − 1)` exactly.

// `f64` math (`sin`, `sqrt`, ...) is `std`-only; this libm-backed trait
// supplies it in `no_std` builds, and the inherent methods shadow it when
// a consumer links `std`.
#[allow(unused_imports)]
use num_traits::Float as _;
use alloc::vec::Vec;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are the roots of the Legendre polynomial `P_n`, found by Newton
/// iteration from the Chebyshev-like initial guesses
/// `cos(π(i + 3/4)/(n + 1/2))`; weights are `2/((1 - x²) P'_n(x)²)`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        // Newton converges in a handful of steps from these guesses; the
        // fixed iteration count is far beyond what's needed at n ≤ 64.
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// `(P_n(x), P'_n(x))` via the three-term recurrence
/// `(k+1) P_{k+1} = (2k+1) x P_k − k P_{k-1}` and the derivative identity
/// `(1 − x²) P'_n = n (P_{n-1} − x P_n)`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0; // P_0
    let mut p = x; // P_1
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p_next = ((2 * k + 1) as f64 * x * p - k as f64 * p_prev) / (k + 1) as f64;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (p_prev - x * p) / (1.0 - x * x);
    (p, dp)
}

/// A quadrature rule for means over the unit sphere: unit directions and
/// weights with `Σ w = 1`, so `Σ w_i f(ω_i)` approximates the spherical
/// mean of `f` and is exact for polynomials of total degree
/// `≤ min(2·n_theta − 1, n_phi − 1)`.
pub(crate) fn sphere_mean_rule(n_theta: usize, n_phi: usize) -> Vec<([f64; 3], f64)> {
    let (cos_nodes, cos_weights) = gauss_legendre(n_theta);
    let mut rule = Vec::with_capacity(n_theta * n_phi);
    for (&ct, &wt) in cos_nodes.iter().zip(&cos_weights) {
        let st = (1.0 - ct * ct).sqrt();
        // Gauss–Legendre weights integrate dt over [-1,1]; the mean carries
        // a 1/2, and the uniform φ rule carries 1/n_phi.
        let w = wt / (2.0 * n_phi as f64);
        for k in 0..n_phi {
            let phi = 2.0 * core::f64::consts::PI * k as f64 / n_phi as f64;
            rule.push(([st * phi.cos(), st * phi.sin(), ct], w));
        }
    }
    rule
}
