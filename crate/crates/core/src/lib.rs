//! Second-moment operators of u-structured random circuits on a ring.
//!
//! A fixed two-qudit gate `u` is sandwiched between independent Haar-random
//! single-qudit unitaries and laid out either as a local circuit (one random
//! neighbouring pair per step) or as a brick-wall. The second-moment operator
//! restricted to the `{I, S}^n` sector is a `2^n x 2^n` matrix that depends on
//! `u` only through two numbers, the entangling power `e_u` and the gate
//! typicality `g_u`. On the line `g_u = e_u / (2 e_H)` both architectures are
//! free-fermion solvable.
//!
//! Modules:
//! - [`gate`]: gate profiles, Weingarten elements, Haar reference values.
//! - [`moment`]: moment matrices in the computational and orthonormal bases, positivity.
//! - [`analytic`]: momentum grids, dispersions, closed-form spectra, fermion modes, eigenvectors.
//! - [`numeric`]: dense eigen-solvers, spectrum matching, parameter scans.
//! - [`frame`]: frame potential and the single domain-wall model.
//! - [`validation`]: the cross-check suite used by `rqcm validate`.

pub mod analytic;
pub mod error;
pub mod format;
pub mod frame;
pub mod gate;
pub mod linalg;
pub mod moment;
pub mod numeric;
pub mod validation;

pub use error::{Error, Result};
pub use num_complex::Complex64;
