//! Distribution and uncertainty helpers: ECDFs, bootstrap standard errors,
//! and the symmetric-log transform used for plotting.

mod bootstrap;
mod ecdf;
mod symlog;

use thiserror::Error;

pub use bootstrap::{bootstrap_stderr, bootstrap_stderr_counts, derive_seed, BootstrapEstimate, DEFAULT_RESAMPLES};
pub use ecdf::{min_shifted_ecdf, Ecdf};
pub use symlog::{symlog, symlog_all, DEFAULT_LINEAR_THRESHOLD};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("at least one bootstrap resample is required")]
    NoResamples,
}
