//! Standard-library companion to the core: file formats, run manifests,
//! and shared plumbing for the `ptscat` command-line tool.
//!
//! Everything here is about *reproducible artifacts*: numbers are always
//! rendered at 17 significant digits, object keys keep a fixed order, and
//! every file the tool writes can be traced back through its manifest.

// Validation sites use `!(x > 0.0)` on purpose: the negation treats NaN as
// out of range, which `x <= 0.0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod configio;
pub mod grid;
pub mod json;
pub mod manifest;
