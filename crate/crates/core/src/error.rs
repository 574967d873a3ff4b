//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by configuration validation and the numeric kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two scatterers are closer than the minimum-separation threshold.
    #[error("coincident scatterers {i} and {j}: distance {distance:e} below threshold {threshold:e}")]
    CoincidentScatterers {
        i: usize,
        j: usize,
        distance: f64,
        threshold: f64,
    },

    /// Energy outside the real non-negative branch `√E ≥ 0`.
    #[error("energy must be finite and non-negative, got {value}")]
    InvalidEnergy { value: f64 },

    /// The contact matrix is numerically singular at the requested energy,
    /// so the scattering system has no meaningful solution.
    #[error("contact matrix is singular: smallest singular value {sigma_min:e} (condition {condition:e})")]
    Resonance { sigma_min: f64, condition: f64 },

    /// A field was evaluated too close to a scatterer position.
    #[error("evaluation point within {threshold:e} of scatterer {index}")]
    EvaluationAtScatterer { index: usize, threshold: f64 },

    /// The multipole series is only certified for |x| well outside the
    /// scatterer ring.
    #[error("series evaluation requires |x| > 2 r0: |x| = {radius:e}, r0 = {r0:e}")]
    SeriesOutOfDomain { radius: f64, r0: f64 },

    /// The bracket search did not find a near-zero smallest singular value.
    #[error("no critical alpha in bracket: achieved minimum singular value {achieved:e}")]
    NoCriticalAlpha { achieved: f64 },

    /// Far-field samples underflowed; the radius range must be reduced.
    #[error("field magnitude underflow at R = {radius:e}; reduce the radius range")]
    DecayUnderflow { radius: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl core::fmt::Display) -> Self {
        Error::InvalidArgument(alloc::format!("{msg}"))
    }
}
