use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("power exponent must lie in (0, 1], got {0}")]
    InvalidPower(f64),
    #[error("product exponent must be >= 1 or infinity, got {0}")]
    InvalidOrder(f64),
    #[error("gauge exponent must be positive and finite, got {0}")]
    InvalidGaugeExponent(f64),
    #[error("tolerance must be non-negative and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vector must have at least one coordinate")]
    EmptyVector,
    #[error("coordinate {index} is not finite ({value})")]
    NonFiniteCoordinate { index: usize, value: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("point set must be nonempty")]
    EmptyPointSet,
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("radius {radius} lies in [1, {dim}): no subset relation holds between the balls")]
    NoInclusionRegime { radius: f64, dim: usize },
    #[error("radial solve did not reach the boundary within tolerance at angle {theta}")]
    BoundaryNotResolved { theta: f64 },
    #[error("convex body oracle violates its contract: {0}")]
    OracleContract(String),
    #[error("support enumeration limited to n <= {limit} columns, got {n}")]
    EnumerationTooLarge { n: usize, limit: usize },
    #[error("no support of size <= {max_support} reaches the residual tolerance (best residual {best_residual})")]
    Infeasible { max_support: usize, best_residual: f64 },
    #[error("system is inconsistent (least-squares residual {residual})")]
    InconsistentSystem { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
