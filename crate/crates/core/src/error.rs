//! Crate-wide error type. Every failure mode carries a stable machine-readable
//! code (used verbatim by the CLI's JSON error objects).

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is numerically singular (|det| = {det_abs:.3e})")]
    SingularMatrix { det_abs: f64 },

    #[error("divisor classes live on different relation lattices")]
    MixedLattice,

    #[error("|G| = {g_abs:.3e} is below the degeneracy guard 1e-12; B is undefined")]
    DegenerateG { g_abs: f64 },

    #[error("zeta = 0 is not admissible")]
    ZeroZeta,

    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },

    #[error("evaluation point within {dist:.3e} of the pole at {pole}")]
    PoleEvaluation { pole: String, dist: f64 },

    #[error("path piece {piece} violates geometric constraints: {reason}")]
    BadPath { piece: usize, reason: String },

    #[error("integrator exceeded the step budget of {max_steps}")]
    StepLimitExceeded { max_steps: u64 },

    #[error("path wandered inside the pole guard near {pole}")]
    PoleApproach { pole: String },

    #[error("symmetry check requires matching accessory data at +/-zeta")]
    MismatchedParams,

    #[error("input matrix {index} is not unimodular (|det - 1| = {defect:.3e})")]
    NonUnimodular { index: usize, defect: f64 },

    #[error("grid too small: need at least {need}x{need}, got {got_x}x{got_y}")]
    GridTooSmall { need: usize, got_x: usize, got_y: usize },

    #[error("Newton solve failed: jacobian is rank-deficient")]
    NewtonSingular,

    #[error("Newton solve failed: no convergence within {max_iter} iterations")]
    NewtonMaxIter { max_iter: usize },

    #[error("Newton solve failed: G entered the degeneracy guard")]
    NewtonLeftDomain,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable short code for machine consumption.
    pub fn code(&self) -> &'static str {
        match self {
            Error::SingularMatrix { .. } => "singular_matrix",
            Error::MixedLattice => "mixed_lattice",
            Error::DegenerateG { .. } => "degenerate_g",
            Error::ZeroZeta => "zero_zeta",
            Error::NonFinite { .. } => "non_finite",
            Error::PoleEvaluation { .. } => "pole_evaluation",
            Error::BadPath { .. } => "bad_path",
            Error::StepLimitExceeded { .. } => "step_limit_exceeded",
            Error::PoleApproach { .. } => "pole_approach",
            Error::MismatchedParams => "mismatched_params",
            Error::NonUnimodular { .. } => "non_unimodular",
            Error::GridTooSmall { .. } => "grid_too_small",
            Error::NewtonSingular => "newton_singular",
            Error::NewtonMaxIter { .. } => "newton_max_iter",
            Error::NewtonLeftDomain => "newton_left_domain",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Io(_) => "io_error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
