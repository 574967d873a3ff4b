//! Zero-range (multipoint) scatterer models in three dimensions.
//!
//! A multipoint scatterer is a finite collection of points `z_j` with
//! strength parameters `α_j`. Fields built on such a scatterer are free
//! solutions of `-Δψ = Eψ` away from the points, with a prescribed
//! `1/|x - z_j|` singularity at each point whose pole and constant
//! coefficients are locked together by the contact condition
//! `ψ_{j,0} = 4π α_j ψ_{j,-1}`.
//!
//! Everything reduces to dense linear algebra on the n×n contact matrix
//! `A(E)`: scattering states solve `A q = φ` against an incident wave,
//! and zero-energy bound states correspond to null vectors of `A(0)`
//! that are additionally charge neutral (`Σ q_j = 0`).
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the
//! command-line front end live in the companion `ptscat-cli` crate.
//!
//! Modules:
//! - [`model`] — scatterer configurations and the tetrahedron / 2m-gon
//!   generator families
//! - [`greens`] — free-space Green's function and contact-matrix assembly
//! - [`spectral`] — zero-energy bound-state detection and evaluation
//! - [`scattering`] — scattering solves and contact-condition extraction
//! - [`farfield`] — multipole coefficients, series evaluation and
//!   far-field decay fitting

#![no_std]
// Validation sites use `!(x > 0.0)` on purpose: the negation treats NaN as
// out of range, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod farfield;
pub mod greens;
pub mod model;
pub mod scattering;
pub mod spectral;

mod quad;

pub use error::{Error, Result};
