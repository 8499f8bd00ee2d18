use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, got n = {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("curve is not horizontally regular (min |beta'| = {min_speed:.3e} <= tol {tol:.3e})")]
    NotHorizontallyRegular { min_speed: f64, tol: f64 },

    #[error("degenerate jet: osculating span has rank {rank} < {order}; classify and reduce first")]
    Degenerate { rank: usize, order: usize },

    #[error("frame conditioning failure: {0}")]
    Conditioning(String),

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("order misclassification: reduction residual {residual:.3e} exceeds {tol:.3e}")]
    Misclassification { residual: f64, tol: f64 },

    #[error("integrator step size too large: per-step projection correction {correction:.3e}")]
    StepSize { correction: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
