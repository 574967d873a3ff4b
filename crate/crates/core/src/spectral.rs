//! Zero-energy bound-state detection and evaluation.
//!
//! A configuration binds a state at `E = 0` exactly when the real contact
//! matrix `A(0)` has a null vector `q` whose components also sum to zero;
//! charge neutrality kills the `1/|x|` monopole and makes
//!
//! ```text
//! ψ(x) = -(1/4π) Σ_j q_j / |x - z_j|
//! ```
//!
//! square-integrable. Numerically both conditions are folded into one
//! spectral question: stack `A(0)` with a row of ones and ask how many
//! singular values of the `(n+1)×n` augmented matrix vanish. The
//! multiplicity decision is a single spectral-gap threshold, and the gap
//! itself (the decision margin) is reported so the call can be audited.

use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::greens::{assemble_contact_matrix, Energy};
use crate::model::{make_polygon, Configuration, Point3, PointScatterer};

const FOUR_PI: f64 = 4.0 * core::f64::consts::PI;

/// Default relative rank tolerance: singular values at or below
/// `rtol·σ_max` count as zero. Exactly-symmetric constructions in double
/// precision leave at least six orders of magnitude between genuine null
/// directions and the retained spectrum, so 1e-8 sits comfortably in the
/// gap.
pub const DEFAULT_RANK_RTOL: f64 = 1e-8;

/// An orthonormal basis of zero-energy charge vectors, with the singular
/// values behind the rank decision.
///
/// Each basis vector `q` satisfies `A(0)q ≈ 0` and `Σ q_j ≈ 0` to within
/// the rank tolerance; vectors are unit Euclidean norm, mutually
/// orthogonal, ordered from most to least null, and sign-fixed so the
/// first non-negligible component is positive (the SVD's sign ambiguity
/// would otherwise break reproducibility).
#[derive(Debug, Clone, PartialEq)]
pub struct BoundStateBasis {
    multiplicity: usize,
    basis: Vec<Vec<f64>>,
    singular_values: Vec<f64>,
    rank_tolerance: f64,
}

impl BoundStateBasis {
    /// Number of independent zero-energy bound states found.
    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn has_bound_state(&self) -> bool {
        self.multiplicity > 0
    }

    /// Charge vectors, one per bound state; `basis()[0]` has the smallest
    /// singular value.
    pub fn basis(&self) -> &[Vec<f64>] {
        &self.basis
    }

    /// All `n` singular values of the augmented matrix, descending.
    pub fn singular_values(&self) -> &[f64] {
        &self.singular_values
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }

    /// Smallest singular value counted as nonzero. The ones row keeps
    /// `σ_max` strictly positive, so at least one value is always
    /// retained.
    pub fn sigma_min_retained(&self) -> f64 {
        self.singular_values[self.singular_values.len() - self.multiplicity - 1]
    }

    /// Largest singular value counted as zero; 0 when the multiplicity is
    /// zero (nothing was discarded).
    pub fn sigma_max_discarded(&self) -> f64 {
        if self.multiplicity == 0 {
            0.0
        } else {
            self.singular_values[self.singular_values.len() - self.multiplicity]
        }
    }

    /// Decision margin `σ_min_retained / σ_max_discarded`; `+∞` when
    /// nothing was discarded or the discarded values are exact zeros. A
    /// large margin means the multiplicity is insensitive to the exact
    /// tolerance.
    pub fn margin(&self) -> f64 {
        let discarded = self.sigma_max_discarded();
        if discarded == 0.0 {
            f64::INFINITY
        } else {
            self.sigma_min_retained() / discarded
        }
    }
}

/// The `(n+1)×n` real matrix stacking `A(0)` on top of a row of ones.
///
/// Its null space is exactly the set of charge vectors satisfying both
/// bound-state conditions: `A(0)q = 0` and `Σ q_j = 0`.
pub fn augmented_zero_energy_matrix(config: &Configuration) -> DMatrix<f64> {
    let n = config.len();
    let a = assemble_contact_matrix(config, Energy::ZERO)
        .as_real()
        .expect("the zero-energy contact matrix is real by construction");
    DMatrix::from_fn(n + 1, n, |r, c| if r < n { a[(r, c)] } else { 1.0 })
}

/// Flips `v` so its first non-negligible component (relative to the
/// largest magnitude) is positive.
fn fix_sign(v: &mut [f64]) {
    let max_abs = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if max_abs == 0.0 {
        return;
    }
    let negligible = 1e-8 * max_abs;
    if let Some(&lead) = v.iter().find(|x| x.abs() > negligible) {
        if lead < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Projects `v` onto the zero-sum hyperplane, then folds the remaining
/// floating-point rounding of the sum into single components until the
/// computed sum is exactly zero (or stops moving).
///
/// The detected space lies inside `{Σq = 0}` by definition, so this only
/// removes representation error of the order of one unit in the last
/// place. Left in, that error re-enters far-field evaluations as a
/// spurious monopole decaying like `1/R`, which overtakes the genuine
/// `R^{-(m+1)}` signal of a unit-norm basis vector beyond `R ~ 10³` and
/// corrupts fitted decay exponents.
fn enforce_zero_sum(v: &mut [f64]) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    for x in v.iter_mut() {
        *x -= mean;
    }
    // Largest components first: the relative perturbation is smallest
    // there, and the correction is most likely to survive rounding.
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| {
        v[b].abs()
            .partial_cmp(&v[a].abs())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    for _ in 0..64 {
        let s: f64 = v.iter().sum();
        if s == 0.0 {
            return;
        }
        let mut moved = false;
        for &k in &order {
            let adjusted = v[k] - s;
            if adjusted != v[k] {
                v[k] = adjusted;
                moved = true;
                break;
            }
        }
        if !moved {
            // The residual is below half an ulp of every component; it is
            // as small as the format allows.
            return;
        }
    }
}

/// Detects zero-energy bound states: SVD of the augmented matrix, with
/// multiplicity = number of singular values `≤ rtol·σ_max` and the basis
/// taken from the corresponding right-singular vectors.
pub fn zero_energy_null_space(config: &Configuration, rtol: f64) -> Result<BoundStateBasis> {
    if !(rtol > 0.0 && rtol < 1.0) {
        return Err(Error::invalid(format_args!(
            "rank tolerance must lie in (0, 1), got {rtol}"
        )));
    }
    let n = config.len();
    let svd = augmented_zero_energy_matrix(config).svd(false, true);
    let v_t = svd
        .v_t
        .expect("right-singular vectors were requested from the SVD");
    let raw = svd.singular_values;

    // Sort indices by singular value, descending, rather than trusting the
    // backend's ordering; the basis must pair with the right rows of Vᵀ.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        raw[b]
            .partial_cmp(&raw[a])
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    let singular_values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();

    let sigma_max = singular_values[0];
    let threshold = rtol * sigma_max;
    let multiplicity = singular_values.iter().filter(|&&s| s <= threshold).count();

    // Discarded indices, smallest singular value first.
    let mut basis = Vec::with_capacity(multiplicity);
    for &i in order[n - multiplicity..].iter().rev() {
        let mut q: Vec<f64> = v_t.row(i).iter().copied().collect();
        fix_sign(&mut q);
        enforce_zero_sum(&mut q);
        basis.push(q);
    }

    Ok(BoundStateBasis {
        multiplicity,
        basis,
        singular_values,
        rank_tolerance: rtol,
    })
}

/// Direct check of the two bound-state conditions for a candidate charge
/// vector:
///
/// ```text
/// max( ‖A(0)q‖_∞ / (‖A(0)‖_∞·‖q‖_∞),  |Σ q_j| / ‖q‖₁ )
/// ```
///
/// Both terms are scale-invariant in `q`; a genuine bound-state vector
/// scores near machine precision, a generic vector scores `O(1)`.
pub fn bound_state_residual(config: &Configuration, q: &[f64]) -> Result<f64> {
    let n = config.len();
    if q.len() != n {
        return Err(Error::invalid(format_args!(
            "charge vector length {} does not match configuration size {n}",
            q.len()
        )));
    }
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid("charge vector has non-finite components"));
    }
    let q_inf = q.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if q_inf == 0.0 {
        return Err(Error::invalid("charge vector must be nonzero"));
    }

    let a = assemble_contact_matrix(config, Energy::ZERO)
        .as_real()
        .expect("the zero-energy contact matrix is real by construction");
    let mut aq_inf: f64 = 0.0;
    let mut a_inf: f64 = 0.0;
    for r in 0..n {
        let mut row_dot = 0.0;
        let mut row_abs = 0.0;
        for c in 0..n {
            row_dot += a[(r, c)] * q[c];
            row_abs += a[(r, c)].abs();
        }
        aq_inf = aq_inf.max(row_dot.abs());
        a_inf = a_inf.max(row_abs);
    }
    let q_sum: f64 = q.iter().sum();
    let q_l1: f64 = q.iter().map(|x| x.abs()).sum();
    Ok((aq_inf / (a_inf * q_inf)).max(q_sum.abs() / q_l1))
}

/// Evaluates the zero-energy bound state `ψ(x) = -(1/4π) Σ_j q_j/|x-z_j|`
/// for a charge vector `q` (accepted as-is; meeting the bound-state
/// conditions is the caller's contract).
///
/// Far from the configuration the terms of the sum agree to many digits
/// and cancel, so for `|x|` beyond twice the configuration radius the sum
/// is evaluated in the algebraically identical split form
///
/// ```text
/// Σ q_j/r_j = (Σq_j)/|x| + Σ q_j·(2x·z_j - |z_j|²)/(r_j·|x|·(r_j + |x|))
/// ```
///
/// whose terms are already of the size of the physical residue; this keeps
/// the relative accuracy of the far field at the machine-precision level
/// instead of losing a factor `|x|/diam` to cancellation.
pub fn bound_state_eval(config: &Configuration, q: &[f64], x: Point3) -> Result<f64> {
    let n = config.len();
    if q.len() != n {
        return Err(Error::invalid(format_args!(
            "charge vector length {} does not match configuration size {n}",
            q.len()
        )));
    }
    let threshold = config.separation_threshold();
    let mut dist = Vec::with_capacity(n);
    for j in 0..n {
        let r = x.dist(&config.position(j));
        if r <= threshold {
            return Err(Error::EvaluationAtScatterer {
                index: j,
                threshold,
            });
        }
        dist.push(r);
    }

    let big_r = x.norm();
    let sum = if big_r > 2.0 * config.max_radius() && big_r > 0.0 {
        let q_total: f64 = q.iter().sum();
        let mut acc = q_total / big_r;
        for j in 0..n {
            let z = config.position(j);
            let num = 2.0 * x.dot(&z) - z.norm_squared();
            acc += q[j] * num / (dist[j] * big_r * (dist[j] + big_r));
        }
        acc
    } else {
        let mut acc = 0.0;
        for j in 0..n {
            acc += q[j] / dist[j];
        }
        acc
    };
    Ok(-sum / FOUR_PI)
}

/// One row of the polygon conjecture scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub m: u32,
    pub multiplicity: usize,
    pub sigma_min_retained: f64,
    pub sigma_max_discarded: f64,
    pub margin: f64,
}

/// Builds the 2m-gon and runs the bound-state detector; one scan row.
pub fn scan_polygon(m: u32, r0: f64, rtol: f64) -> Result<ScanRow> {
    let config = make_polygon(m, r0)?;
    let basis = zero_energy_null_space(&config, rtol)?;
    Ok(ScanRow {
        m,
        multiplicity: basis.multiplicity(),
        sigma_min_retained: basis.sigma_min_retained(),
        sigma_max_discarded: basis.sigma_max_discarded(),
        margin: basis.margin(),
    })
}

/// Multiplicity scan over the polygon family `m = 1..m_max` at fixed
/// circumradius. The conjecture this probes: every 2m-gon bound state is
/// simple (multiplicity 1); it has been checked numerically through
/// `m = 48`. Margins are reported because conditioning beyond that range
/// is uncharacterized — the scan states what it measured, nothing more.
pub fn conjecture_scan(m_max: u32, r0: f64, rtol: f64) -> Result<Vec<ScanRow>> {
    if m_max < 1 {
        return Err(Error::invalid("scan requires m_max ≥ 1"));
    }
    (1..=m_max).map(|m| scan_polygon(m, r0, rtol)).collect()
}

/// Smallest singular value of the augmented matrix for `positions` with a
/// uniform strength `alpha`, plus the largest one for scale.
fn uniform_alpha_sigma(positions: &[Point3], alpha: f64) -> (f64, f64) {
    let scatterers: Vec<PointScatterer> = positions
        .iter()
        .map(|&p| PointScatterer::new(p, alpha))
        .collect();
    let config = Configuration::new(scatterers)
        .expect("positions were validated before the search started");
    let aug = augmented_zero_energy_matrix(&config);
    let sv = aug.svd(false, false).singular_values;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &s in sv.iter() {
        lo = lo.min(s);
        hi = hi.max(s);
    }
    (lo, hi)
}

/// Finds the uniform strength `α*` at which a fixed geometry acquires a
/// zero-energy bound state, by minimizing the smallest augmented singular
/// value `σ_min(α)` over `[alpha_lo, alpha_hi]`.
///
/// A coarse 64-interval sweep brackets the best candidate, golden-section
/// search narrows the bracket to width `tol`, and the result is accepted
/// only if the achieved minimum is consistent with an actual zero:
/// `σ_min ≤ 10·tol + 1e-12·σ_max` (the slope of `σ_min` in `α` is at most
/// 1, so a true zero within `tol` of the final point cannot exceed this).
/// Otherwise the bracket contains no critical strength and the achieved
/// minimum is reported in the error.
pub fn find_critical_alpha(
    positions: &[Point3],
    alpha_lo: f64,
    alpha_hi: f64,
    tol: f64,
) -> Result<f64> {
    if !(alpha_lo.is_finite() && alpha_hi.is_finite() && alpha_lo < alpha_hi) {
        return Err(Error::invalid(format_args!(
            "alpha bracket must be finite with alpha_lo < alpha_hi, got [{alpha_lo}, {alpha_hi}]"
        )));
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::invalid(format_args!(
            "search tolerance must be positive and finite, got {tol}"
        )));
    }
    // Validate the geometry once up front (distinctness, finiteness).
    {
        let scatterers: Vec<PointScatterer> = positions
            .iter()
            .map(|&p| PointScatterer::new(p, 0.0))
            .collect();
        Configuration::new(scatterers)?;
    }

    let mut best_alpha = alpha_lo;
    let mut best_sigma = f64::INFINITY;
    let mut observe = |alpha: f64| -> f64 {
        let (sigma, _) = uniform_alpha_sigma(positions, alpha);
        if sigma < best_sigma {
            best_sigma = sigma;
            best_alpha = alpha;
        }
        sigma
    };

    // Coarse sweep to bracket the minimum; golden-section needs
    // unimodality only within the refined bracket.
    const COARSE: usize = 64;
    let step = (alpha_hi - alpha_lo) / COARSE as f64;
    let mut best_idx = 0;
    let mut best_coarse = f64::INFINITY;
    for i in 0..=COARSE {
        let alpha = alpha_lo + step * i as f64;
        let sigma = observe(alpha);
        if sigma < best_coarse {
            best_coarse = sigma;
            best_idx = i;
        }
    }
    let mut a = alpha_lo + step * best_idx.saturating_sub(1) as f64;
    let mut b = alpha_lo + step * (best_idx + 1).min(COARSE) as f64;

    const INV_GOLDEN: f64 = 0.618_033_988_749_894_9; // (√5 − 1)/2
    let mut c = b - INV_GOLDEN * (b - a);
    let mut d = a + INV_GOLDEN * (b - a);
    let mut fc = observe(c);
    let mut fd = observe(d);
    let mut iterations = 0;
    while (b - a) > tol && iterations < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_GOLDEN * (b - a);
            fc = observe(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_GOLDEN * (b - a);
            fd = observe(d);
        }
        iterations += 1;
    }

    let (sigma_min, sigma_max) = uniform_alpha_sigma(positions, best_alpha);
    if sigma_min <= 10.0 * tol + 1e-12 * sigma_max {
        Ok(best_alpha)
    } else {
        Err(Error::NoCriticalAlpha { achieved: sigma_min })
    }
}
