use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("symmetry violation: max deviation {max_deviation:.3e}")]
    Symmetry { max_deviation: f64 },
    #[error("magnitude vanishes or is negative at k = {k}")]
    NonpositiveMagnitude { k: f64 },
    #[error("singular discretized system (condition estimate {condition:.3e})")]
    Singular { condition: f64 },
    #[error("residual {residual:.3e} exceeds tolerance {tolerance:.3e}")]
    Residual { residual: f64, tolerance: f64 },
    #[error("Jost function vanishes near k = {k} (bound state or resonance)")]
    BoundState { k: f64 },
    #[error("vanishing denominator at k = {k}")]
    ZeroDenominator { k: f64 },
    #[error("area is not positive at x = {x}")]
    NonpositiveArea { x: f64 },
    #[error("relative area vanishes at x = {x}")]
    UnphysicalArea { x: f64 },
    #[error("exceptional case at k = 0 is not supported on this path")]
    Exceptional,
    #[error("unitarity violated: |L| = {modulus} at k = {k}")]
    Unitarity { k: f64, modulus: f64 },
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
