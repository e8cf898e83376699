use thiserror::Error;

/// Errors raised by the library.
///
/// Variants are grouped by how a frontend should react: `Input` and `Parse`
/// are caller mistakes, `Resource` and `Precision` mean a bounded search gave
/// up, and `Internal` flags a broken invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("insufficient precision: {0}")]
    Precision(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
