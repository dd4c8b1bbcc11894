use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("dimension mismatch: source n={source_dim}, target n={target_dim}")]
    DimensionMismatch { source_dim: u32, target_dim: u32 },

    #[error("outside composition domain: {0}")]
    OutsideCompositionDomain(String),

    #[error("not in the parameter domain: condition {0} fails")]
    NotInDomain(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = CalcError> = std::result::Result<T, E>;
