use thiserror::Error;

/// Errors raised by the algebra, factorization and corona routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ApwError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operands live over different frequency bases")]
    BasisMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("spectrum is not commensurable (group rank {0} > 1)")]
    NotCommensurable(usize),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("completion failed: {0}")]
    CompletionFailed(String),
    #[error("pair is not coprime: {0}")]
    NotCoprime(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("inconsistent result: {0}")]
    Inconsistent(String),
    #[error("ill-conditioned: {0}")]
    Conditioning(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<ApwError>,
    },
}

/// Coarse error classes; the CLI maps each class to its own exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Domain,
    UnsupportedRank,
    NotInvertible,
    Infeasible,
}

impl ApwError {
    pub fn class(&self) -> ErrorClass {
        match self {
            ApwError::Parse(_) => ErrorClass::Parse,
            ApwError::Dimension(_)
            | ApwError::BasisMismatch
            | ApwError::Shape(_)
            | ApwError::Domain(_)
            | ApwError::Conditioning(_) => ErrorClass::Domain,
            ApwError::NotCommensurable(_) => ErrorClass::UnsupportedRank,
            ApwError::NotInvertible(_)
            | ApwError::CompletionFailed(_)
            | ApwError::NotCoprime(_) => ErrorClass::NotInvertible,
            ApwError::Infeasible(_) | ApwError::Inconsistent(_) => ErrorClass::Infeasible,
            ApwError::Stage { source, .. } => source.class(),
        }
    }

    /// Innermost error, with stage wrappers removed.
    pub fn root(&self) -> &ApwError {
        match self {
            ApwError::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn at(self, stage: &'static str) -> ApwError {
        ApwError::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, ApwError>;
