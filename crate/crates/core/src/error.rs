use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid dimension: expected {expected}, found {}x{}", found.0, found.1)]
    InvalidDimension {
        expected: &'static str,
        found: (usize, usize),
    },
    #[error("matrix is not Hermitian (max asymmetry {max_asymmetry:e})")]
    NotHermitian { max_asymmetry: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("matrix is not normalized (trace {trace})")]
    NotNormalized { trace: f64 },
    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("invalid budget: {0}")]
    InvalidBudget(&'static str),
    #[error(
        "optimizer did not converge after {iterations} iterations \
         (best value {best}, spread {spread:e})"
    )]
    NonConvergence {
        best: f64,
        spread: f64,
        iterations: usize,
    },
    #[error("discord came out negative ({value:e}); internal inconsistency")]
    NegativeDiscord { value: f64 },
    #[error("state has no zero-visibility A rotation (residual visibility {max_visibility:e})")]
    NotZeroDiscord { max_visibility: f64 },
    #[error("observable spectrum is not {{+1, -1}} (eigenvalue {eigenvalue})")]
    UnsupportedObservable { eigenvalue: f64 },
    #[error("{count} simulated measurements exceed the resource guard")]
    ResourceGuard { count: u128 },
    #[error("tomographic reconstruction failed (trace {trace})")]
    ReconstructionFailed { trace: f64 },
    #[error("measurement count overflows 128 bits (exponent {exponent})")]
    CostOverflow { exponent: u32 },
}
