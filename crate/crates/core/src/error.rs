use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OttoError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The second-order map pushed a population outside [0, 1].
    #[error("positivity violation: rho00 = {rho00} at t = {time} (tolerance {tolerance})")]
    PositivityViolation {
        time: f64,
        rho00: f64,
        tolerance: f64,
    },

    #[error("degenerate cycle: |p0| = {p0} leaves no unique fixed point")]
    DegenerateCycle { p0: f64 },

    #[error("oracle dimension {dimension} exceeds the limit {limit}")]
    OracleTooLarge { dimension: usize, limit: usize },
}

impl OttoError {
    /// True for failures of the numerics (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            OttoError::PositivityViolation { .. } | OttoError::DegenerateCycle { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, OttoError>;
