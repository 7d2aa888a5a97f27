use prym_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("{reason}; supply an override for {key}")]
    OverrideRequired { key: String, reason: String },
    #[error("resource exhausted: {0}")]
    ResourceExhausted(String),
    #[error("undeterminable: {0}")]
    Undeterminable(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

impl CoreError {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            CoreError::OverrideRequired { .. } | CoreError::Undeterminable(_) => 2,
            CoreError::UnsupportedCase(_) => 3,
            CoreError::ResourceExhausted(_) => 4,
            CoreError::Algebra(
                AlgebraError::FactorizationTimeout { .. }
                | AlgebraError::PrecisionExhausted { .. }
                | AlgebraError::ExtensionTooLarge(_),
            ) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
