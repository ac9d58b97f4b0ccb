//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("no sign change of f on [{lo}, {hi}] (f(lo)={f_lo:e}, f(hi)={f_hi:e})")]
    NoRootInBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("field shape mismatch: {0}")]
    Shape(String),

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("linear solve stagnated after {iters} iterations (relative residual {residual:e})")]
    SolveFailure { iters: usize, residual: f64 },

    #[error("numerical blowup at step {step}: {context}")]
    Blowup { step: usize, context: String },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config { key: key.into(), reason: reason.into() }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
