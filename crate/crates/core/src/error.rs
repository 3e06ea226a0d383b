use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid dimension {dim}: at least {min} required")]
    InvalidDimension { dim: usize, min: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix or vector contains non-finite entries")]
    NonFinite,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} failed to converge (best residual {residual:e})")]
    NumericFailure { what: &'static str, residual: f64 },

    #[error("at grid point {param}: {source}")]
    AtGridPoint { param: f64, source: Box<Error> },

    #[error("no exceptional point in bracket [{lo}, {hi}]")]
    NoEpInBracket { lo: f64, hi: f64 },

    #[error("ambiguous exceptional point: first-kind candidate {first} and second-kind candidate {second} coincide")]
    AmbiguousEp { first: f64, second: f64 },

    #[error("no clear rank cut in the singular spectrum")]
    RankAmbiguity { singular_values: Vec<f64> },

    #[error("metric singular at eta = {eta} (exceptional point at {location})")]
    MetricSingularity { eta: f64, location: f64 },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("matrix is not positive definite (eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("quasi-Hermiticity constraint violated (residual {residual:e})")]
    ConstraintViolation { residual: f64 },
}

impl Error {
    pub(crate) fn at(param: f64, source: Error) -> Self {
        Error::AtGridPoint {
            param,
            source: Box::new(source),
        }
    }
}
