//! Scenario files, sweeps, parallel Monte Carlo verification and the
//! `secout` command line, on top of [`secout_core`].

// NaN must fail every parameter check, hence `!(x > 0.0)` throughout
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod format;
pub mod oracle;
pub mod sweep;

pub use secout_core;

/// Everything the command line can fail with.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{0}")]
    Config(#[from] config::ConfigError),
    #[error("{0}")]
    Core(#[from] secout_core::Error),
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}
