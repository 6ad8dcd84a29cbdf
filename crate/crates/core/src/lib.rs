//! Numerical and exact-arithmetic toolkit for the integrable-systems structure
//! of Lawson's genus-2 minimal surface.
//!
//! The crate is organised around the quotient picture of the surface: exact
//! divisor-class arithmetic on the curve `y^3 = z^4 - 1` ([`divisors`]), the
//! explicit family of meromorphic connection 1-forms on the 4-punctured sphere
//! ([`potential`]), parallel transport and monodromy of that family
//! ([`monodromy`]), verification of its symmetries ([`symmetry`]), surface-level
//! holonomy assembly with unitarizability detection and accessory-parameter
//! exploration ([`analysis`]), and the local zero-curvature model of minimal
//! surfaces in the 3-sphere ([`localmodel`]).
//!
//! All floating-point work is plain `f64`; exact integer arithmetic lives in
//! [`divisors`]. With the default `parallel` feature, batch drivers fan out
//! over rayon; results are merged by input index so output is identical to the
//! sequential fallback.

pub mod analysis;
pub mod divisors;
pub mod error;
pub mod linalg;
pub mod localmodel;
pub mod monodromy;
mod par;
pub mod potential;
pub mod symmetry;

pub use error::Error;
pub use linalg::Mat2;

/// Complex scalar used throughout the numerical modules.
pub type Complex = num_complex::Complex64;
