use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("no convergence after {iterations} steps (estimate {estimate:e}, error {error:e})")]
    Nonconvergence { estimate: f64, error: f64, iterations: usize },
    #[error("singular matrix (pivot {pivot:e} at scale {scale:e})")]
    Singular { pivot: f64, scale: f64 },
    #[error("found {found} of {expected} roots on the circle")]
    RootCount { found: usize, expected: usize },
    #[error("hypothesis {name} violated: {detail}")]
    Hypothesis { name: &'static str, detail: String },
    #[error("support of the measure is not contained in [{bound}, inf)")]
    Support { bound: f64 },
    #[error("integrand not integrable: {0}")]
    NotIntegrable(String),
    #[error("measure is trivial for degree {0}")]
    TrivialMeasure(usize),
    #[error("degree {got} exceeds {max}")]
    DegreeExceeded { got: usize, max: usize },
    #[error("abscissa {0} lies on a zero")]
    AbscissaOnZero(f64),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
