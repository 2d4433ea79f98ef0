use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the models and solvers in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate conductivity |sigma| = {magnitude:e} S")]
    DegenerateConductivity { magnitude: f64 },

    #[error("q = {q} lies within branch-cut tolerance of cladding layer {layer}")]
    BranchCut { layer: usize, q: Complex64 },

    #[error("mode solver did not converge after {iterations} iterations (last q = {last_q})")]
    NoConvergence { iterations: usize, last_q: Complex64 },

    #[error("root q = {q} is not a bound mode: {reason}")]
    NotBound { q: Complex64, reason: String },

    #[error("no resonance in {lo:e}..{hi:e} Hz")]
    NoResonanceInBand { lo: f64, hi: f64 },

    #[error("mode is not bound at band edge {frequency:e} Hz")]
    NonBoundBandEdge { frequency: f64 },

    #[error("config parse error at line {line}, column {column}: {message}")]
    ConfigParse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid config key `{key}`: {message}")]
    ConfigKey { key: String, message: String },

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn key(key: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::ConfigKey {
            key: key.into(),
            message: msg.into(),
        }
    }

    /// Short single-line reason used in per-row status cells.
    pub fn reason(&self) -> String {
        match self {
            Error::NoConvergence { .. } => "no-convergence".into(),
            Error::NotBound { .. } => "not-bound".into(),
            Error::BranchCut { .. } => "branch-cut".into(),
            Error::NoResonanceInBand { .. } => "no-resonance-in-band".into(),
            Error::NonBoundBandEdge { .. } => "non-bound-band-edge".into(),
            Error::DegenerateConductivity { .. } => "degenerate-conductivity".into(),
            other => other.to_string().replace(['\n', ','], " "),
        }
    }
}
