use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature failed on [{a}, {b}]: {reason}")]
    Quadrature { a: f64, b: f64, reason: String },

    #[error("ODE step size underflow at r = {r}")]
    StepUnderflow { r: f64 },

    #[error("no eigenvalue bracket found in (0, {lambda_max})")]
    BracketExhausted { lambda_max: f64 },

    #[error("iterative solver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("|G_p| >= F_p at |p| = {p}: F = {f}, G = {g}")]
    CoefficientViolation { p: f64, f: f64, g: f64 },

    #[error("basis dimension {dimension} exceeds the cap {cap}")]
    DimensionOverflow { dimension: usize, cap: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by bad input rather than by a numerical breakdown.
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_) | Error::DimensionOverflow { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Precondition(msg()))
    }
}
