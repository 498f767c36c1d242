// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment runner behind the `wml` binary.
//!
//! Each subcommand resolves a declarative [`config::ExperimentConfig`]
//! (flags > JSON config file > `WML_SEED` env var > defaults), runs a seeded,
//! deterministic experiment, and serializes flat result rows as CSV or JSON.

pub mod config;
pub mod records;
pub mod runners;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] wavematrix::Error),
    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}
