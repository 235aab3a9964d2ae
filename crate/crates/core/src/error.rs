//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CscError {
    #[error("dimension mismatch in {context}: {left} vs {right}")]
    DimensionMismatch {
        context: &'static str,
        left: String,
        right: String,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("ill-conditioned solve: {0}")]
    IllConditioned(String),
    #[error("non-finite data in {0}")]
    NonFinite(String),
    #[error("format error in {path}: {reason}")]
    Format { path: String, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CscError>;

/// Helper for the recurring two-shape mismatch case.
pub(crate) fn dim_mismatch<T>(
    context: &'static str,
    left: impl std::fmt::Debug,
    right: impl std::fmt::Debug,
) -> Result<T> {
    Err(CscError::DimensionMismatch {
        context,
        left: format!("{left:?}"),
        right: format!("{right:?}"),
    })
}
