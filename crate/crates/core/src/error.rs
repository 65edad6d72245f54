use thiserror::Error;

use crate::models::{AnyModel, Family};

/// Errors produced by the fitting, testing and reporting routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("series diverges: exponent {0} must exceed 1")]
    DivergentSeries(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "series did not converge after {terms} terms (partial sum {partial}, tail bound {bound})"
    )]
    NonConvergence {
        terms: u64,
        partial: f64,
        bound: f64,
    },

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("{family} fit failed: {reason}")]
    FitFailure {
        family: Family,
        reason: String,
        best: Option<Box<AnyModel>>,
    },

    #[error("empty tail at x0 = {0}")]
    EmptyTail(u64),

    #[error("insufficient tail: {0}")]
    InsufficientTail(String),

    #[error("bootstrap failed: {failed} of {reps} replicates failed")]
    BootstrapFailure { failed: usize, reps: usize },

    #[error("goodness-of-fit failed: {failed} of {sims} synthetic fits failed")]
    GofFailure { failed: usize, sims: usize },

    #[error("models are indistinguishable on this tail (zero variance of pointwise log-likelihood ratios)")]
    IndistinguishableModels,

    #[error("likelihood evaluation produced a non-finite value at x = {0}")]
    LikelihoodEvaluation(u64),

    #[error("nesting violation: 2*(LL_cutoff - LL_pl) = {0}")]
    NestingViolation(f64),

    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("cannot access {path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable short identifier used in machine-readable error summaries.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivergentSeries(_) => "divergent_series",
            Error::Domain(_) => "domain",
            Error::InvalidModel(_) => "invalid_model",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::NonConvergence { .. } => "non_convergence",
            Error::DegenerateData(_) => "degenerate_data",
            Error::FitFailure { .. } => "fit_failure",
            Error::EmptyTail(_) => "empty_tail",
            Error::InsufficientTail(_) => "insufficient_tail",
            Error::BootstrapFailure { .. } => "bootstrap_failure",
            Error::GofFailure { .. } => "gof_failure",
            Error::IndistinguishableModels => "indistinguishable_models",
            Error::LikelihoodEvaluation(_) => "likelihood_evaluation",
            Error::NestingViolation(_) => "nesting_violation",
            Error::Parse { .. } => "parse",
            Error::Config(_) => "config",
            Error::File { .. } | Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
