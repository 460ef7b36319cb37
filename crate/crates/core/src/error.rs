use alloc::string::String;

/// Errors raised by the algebraic and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("marginal mismatch: {0}")]
    MarginalMismatch(String),

    #[error("{what} exceeds the bound {limit} (got {got})")]
    BoundExceeded {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("matrix is not of the required shape: {0}")]
    Shape(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("block shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("ground space mismatch")]
    GroundMismatch,

    #[error("operation not supported on this ground space: {0}")]
    Unsupported(&'static str),

    #[error("total degree {got} exceeds the cap {cap}")]
    DegreeCap { cap: u32, got: u32 },

    #[error("argument lies within {distance:e} of a pole (guard radius {radius:e})")]
    PoleProximity { distance: f64, radius: f64 },

    #[error("calibration failed: residual {residual:e} above tolerance {tolerance:e}")]
    Calibration { residual: f64, tolerance: f64 },

    #[error("series did not converge: {0}")]
    NonConvergence(String),

    #[error("iteration budget of {0} steps exhausted")]
    IterationBudget(usize),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
