use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("resonance required: effective detuning {detuning:e} exceeds tolerance {tolerance:e}")]
    NotResonant { detuning: f64, tolerance: f64 },

    #[error("dressed basis is degenerate (beta = 0 or no coupling)")]
    DegenerateBasis,

    #[error("weak coupling required: requested Rabi frequency {omega_rabi:e} >= gamma_minus {gamma_minus:e}")]
    WeakCouplingViolation { omega_rabi: f64, gamma_minus: f64 },

    #[error("step size error: {0}")]
    StepSize(String),

    #[error("time grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid time grid: {0}")]
    TimeGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
