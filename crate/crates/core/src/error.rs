use thiserror::Error;

/// Errors raised across the thermodynamic, equilibrium, model and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-positive specific volume: tau = {0}")]
    NonPositiveVolume(f64),

    #[error("non-positive temperature: T = {0}")]
    NonPositiveTemperature(f64),

    #[error("degenerate interface equation of state (theta = 0): T_i(s_i) is not invertible")]
    DegenerateInterfaceEos,

    #[error("mixture entropy is zero: entropy fractions and mixture temperature are undefined")]
    ZeroMixtureEntropy,

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("state a_i = {state} inconsistent with closure value {closure}")]
    ClosureInconsistent { state: f64, closure: f64 },

    #[error("Newton iteration did not converge within {iterations} iterations (residual {residual:e})")]
    MaxIterExceeded { iterations: usize, residual: f64 },

    #[error("singular Jacobian at iteration {iteration}; try another initial guess")]
    SingularJacobian { iteration: usize },

    #[error("iterate left the admissible region: {0}")]
    InfeasibleRegion(String),

    #[error("eigensolver failed to converge")]
    ConvergenceFailure,

    #[error("time step {dt:e} exceeds CFL bound {limit:e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("source integration needs {needed} substeps (limit {limit})")]
    SubcycleLimit { needed: u64, limit: u64 },

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
