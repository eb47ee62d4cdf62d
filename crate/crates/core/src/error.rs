use thiserror::Error;

/// Errors raised by the numerical and combinatorial kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("enumeration too large: n = {n} exceeds the limit {limit}")]
    EnumerationTooLarge { n: usize, limit: usize },

    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("argument out of supported range: {0}")]
    Range(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("zero refinement from {start} did not converge in {iterations} iterations")]
    Refinement { start: f64, iterations: usize },

    #[error("zero table covers ordinates up to {coverage}, but {requested} was requested")]
    Coverage { requested: f64, coverage: f64 },

    #[error("|zeta'(rho)| = {derivative:e} at gamma = {gamma}: suspected multiple zero")]
    NonSimpleZero { gamma: f64, derivative: f64 },

    #[error("series truncation budget exceeded: {0}")]
    Truncation(String),

    #[error("saddle-point solver failed for x = {x}: {message}")]
    Solver { x: f64, message: String },

    #[error("quadrature failed to reach tolerance {tolerance:e}: estimated error {estimate:e}")]
    Quadrature { tolerance: f64, estimate: f64 },

    #[error("cache file: {0}")]
    Cache(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
