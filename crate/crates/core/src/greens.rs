//! Outgoing Helmholtz Green's function and the contact matrix.
//!
//! At energy `E ≥ 0` the outgoing free Green's function in 3D is
//!
//! ```text
//! G⁺(r, E) = -exp(i√E·r) / (4πr),        √E ≥ 0,
//! ```
//!
//! the kernel of `(−Δ − E)⁻¹` with Sommerfeld radiation at infinity. At
//! `E = 0` it reduces to the (real) Coulomb kernel `-1/(4πr)`.
//!
//! The contact matrix of a configuration `{(z_j, α_j)}` couples the
//! scatterers through this kernel:
//!
//! ```text
//! A_{jj}(E)  = α_j − i√E/(4π),
//! A_{jj'}(E) = G⁺(|z_j − z_{j'}|, E),    j ≠ j'.
//! ```
//!
//! Both the scattering solve and the zero-energy bound-state criterion are
//! statements about this matrix: scattering charges solve `A q = φ`, and a
//! zero-energy bound state is a null vector of `A(0)` whose components also
//! sum to zero.

// `f64` math (`sin`, `sqrt`, ...) is `std`-only; this libm-backed trait
// supplies it in `no_std` builds, and the inherent methods shadow it when
// a consumer links `std`.
#[allow(unused_imports)]
use num_traits::Float as _;
use nalgebra::DMatrix;
use num_complex::Complex;
use crate::error::{Error, Result};
use crate::model::Configuration;

const FOUR_PI: f64 = 4.0 * core::f64::consts::PI;

/// A validated non-negative energy `E` with its wavenumber `k = √E ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Energy {
    value: f64,
}

impl Energy {
    pub const ZERO: Energy = Energy { value: 0.0 };

    /// Accepts `E ≥ 0`; anything else is rejected so that `√E` stays on
    /// the non-negative real branch.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidEnergy { value });
        }
        Ok(Energy { value })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// `k = √E ≥ 0`.
    pub fn wavenumber(&self) -> f64 {
        self.value.sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0
    }
}

/// `G⁺(r, E) = -exp(i√E·r)/(4πr)` for `r > 0`.
///
/// At `E = 0` the result is exactly real (the imaginary part is the literal
/// `0.0`, not a rounded sine), so zero-energy contact matrices are real by
/// construction rather than to within roundoff.
pub fn green_plus(r: f64, energy: Energy) -> Result<Complex<f64>> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format_args!(
            "Green's function needs r > 0, got {r}: the singularity is not evaluable"
        )));
    }
    Ok(green_plus_unchecked(r, energy))
}

/// [`green_plus`] without the domain check, for internal call sites that
/// have already guaranteed `r > 0` (validated configurations, guarded
/// field evaluation).
pub(crate) fn green_plus_unchecked(r: f64, energy: Energy) -> Complex<f64> {
    debug_assert!(r > 0.0, "Green's function evaluated at r = {r}");
    if energy.is_zero() {
        return Complex::new(-1.0 / (FOUR_PI * r), 0.0);
    }
    let kr = energy.wavenumber() * r;
    let scale = -1.0 / (FOUR_PI * r);
    Complex::new(scale * kr.cos(), scale * kr.sin())
}

/// The contact matrix `A(E)` of a configuration, dense and complex
/// symmetric (`A = Aᵀ`, not Hermitian for `E > 0`).
#[derive(Debug, Clone, PartialEq)]
pub struct ContactMatrix {
    matrix: DMatrix<Complex<f64>>,
    energy: Energy,
}

impl ContactMatrix {
    pub fn matrix(&self) -> &DMatrix<Complex<f64>> {
        &self.matrix
    }

    pub fn energy(&self) -> Energy {
        self.energy
    }

    /// Number of scatterers (the matrix is `n × n`).
    pub fn len(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.nrows() == 0
    }

    /// The real part as a real matrix, available only when every imaginary
    /// part is exactly zero (always the case at `E = 0`).
    pub fn as_real(&self) -> Option<DMatrix<f64>> {
        if self.matrix.iter().any(|c| c.im != 0.0) {
            return None;
        }
        Some(DMatrix::from_fn(
            self.matrix.nrows(),
            self.matrix.ncols(),
            |r, c| self.matrix[(r, c)].re,
        ))
    }

    /// Max row sum of entry magnitudes, `‖A‖_∞`.
    pub fn inf_norm(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut norm: f64 = 0.0;
        for r in 0..n {
            let mut row = 0.0;
            for c in 0..n {
                row += self.matrix[(r, c)].norm();
            }
            norm = norm.max(row);
        }
        norm
    }
}

/// Assembles `A(E)` for `config`.
///
/// Off-diagonal entries are computed once per unordered pair and written to
/// both `(j, j')` and `(j', j)`, so the result is exactly symmetric, entry
/// by entry, not merely up to rounding.
pub fn assemble_contact_matrix(config: &Configuration, energy: Energy) -> ContactMatrix {
    let n = config.len();
    let mut matrix = DMatrix::from_element(n, n, Complex::new(0.0, 0.0));
    let self_energy = Complex::new(0.0, -energy.wavenumber() / FOUR_PI);
    for j in 0..n {
        matrix[(j, j)] = Complex::new(config.alpha(j), 0.0) + self_energy;
    }
    for j in 0..n {
        for j2 in (j + 1)..n {
            let g = green_plus_unchecked(config.position(j).dist(&config.position(j2)), energy);
            matrix[(j, j2)] = g;
            matrix[(j2, j)] = g;
        }
    }
    ContactMatrix { matrix, energy }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{make_polygon, make_tetrahedron};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn energy_validation() {
        assert!(Energy::new(-1e-12).is_err());
        assert!(Energy::new(f64::NAN).is_err());
        assert!(Energy::new(f64::INFINITY).is_err());
        assert_eq!(Energy::new(0.0).unwrap(), Energy::ZERO);
        assert_relative_eq!(Energy::new(4.0).unwrap().wavenumber(), 2.0);
    }

    #[test]
    fn green_zero_energy_is_coulomb_and_exactly_real() {
        let g = green_plus(2.0, Energy::ZERO).unwrap();
        assert_relative_eq!(g.re, -1.0 / (8.0 * core::f64::consts::PI));
        assert_eq!(g.im, 0.0);
        assert_relative_eq!(
            green_plus(1.0, Energy::ZERO).unwrap().re,
            -1.0 / FOUR_PI,
            max_relative = 1e-15
        );
    }

    #[test]
    fn green_at_pi_squared_energy_flips_sign() {
        // √E = π: G⁺(1, π²) = −e^{iπ}/(4π) = +1/(4π).
        let e = Energy::new(core::f64::consts::PI * core::f64::consts::PI).unwrap();
        let g = green_plus(1.0, e).unwrap();
        assert_relative_eq!(g.re, 1.0 / FOUR_PI, max_relative = 1e-12);
        assert_abs_diff_eq!(g.im, 0.0, epsilon = 1e-16);
    }

    #[test]
    fn green_positive_energy_components() {
        // G⁺(r,E) = -(cos kr + i sin kr)/(4πr)
        let e = Energy::new(4.0).unwrap();
        let r = 0.7;
        let g = green_plus(r, e).unwrap();
        assert_relative_eq!(g.re, -(2.0 * r).cos() / (FOUR_PI * r), max_relative = 1e-15);
        assert_relative_eq!(g.im, -(2.0 * r).sin() / (FOUR_PI * r), max_relative = 1e-15);
        // |G⁺| = 1/(4πr) regardless of E.
        assert_relative_eq!(g.norm(), 1.0 / (FOUR_PI * r), max_relative = 1e-15);
    }

    #[test]
    fn green_rejects_nonpositive_radius() {
        assert!(green_plus(0.0, Energy::ZERO).is_err());
        assert!(green_plus(-1.0, Energy::ZERO).is_err());
        assert!(green_plus(f64::NAN, Energy::ZERO).is_err());
    }

    #[test]
    fn tetrahedron_contact_matrix_at_zero_energy() {
        let config = make_tetrahedron(1.0).unwrap();
        let a = assemble_contact_matrix(&config, Energy::ZERO);
        let real = a.as_real().expect("A(0) must be exactly real");
        // With α = -1/(4π·edge) and unit edge, every entry (diagonal and
        // off-diagonal alike) equals -1/(4π): the matrix is rank one, which
        // is exactly why the kernel is three-dimensional.
        let c = -1.0 / FOUR_PI;
        for r in 0..4 {
            for col in 0..4 {
                assert_relative_eq!(real[(r, col)], c, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn contact_matrix_exactly_symmetric() {
        let config = make_polygon(3, 1.0).unwrap();
        let a = assemble_contact_matrix(&config, Energy::new(2.5).unwrap());
        let m = a.matrix();
        for r in 0..a.len() {
            for c in 0..a.len() {
                assert_eq!(m[(r, c)], m[(c, r)], "entry ({r},{c})");
            }
        }
        assert!(a.as_real().is_none(), "E > 0 matrix has imaginary parts");
    }

    #[test]
    fn single_scatterer_matrix() {
        let config = crate::model::Configuration::new(alloc::vec![
            crate::model::PointScatterer::new(crate::model::Point3::ORIGIN, 0.25),
        ])
        .unwrap();
        let e = Energy::new(9.0).unwrap();
        let a = assemble_contact_matrix(&config, e);
        assert_eq!(a.len(), 1);
        assert_relative_eq!(a.matrix()[(0, 0)].re, 0.25);
        assert_relative_eq!(a.matrix()[(0, 0)].im, -3.0 / FOUR_PI);
    }

    #[test]
    fn inf_norm_matches_hand_sum() {
        let config = make_polygon(1, 0.5).unwrap();
        let a = assemble_contact_matrix(&config, Energy::ZERO);
        // Rows: |α| + 1/(4π·1); α = -1/(4π).
        let expected = 2.0 / FOUR_PI;
        assert_relative_eq!(a.inf_norm(), expected, max_relative = 1e-14);
        assert_abs_diff_eq!(a.inf_norm(), expected, epsilon = 1e-15);
    }
}
