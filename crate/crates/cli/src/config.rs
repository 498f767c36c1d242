// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment configuration: defaults, JSON config file, and precedence.

use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use wavematrix::ensembles::RngSeed;
use wavematrix::wml::WmlStepMethod;

use crate::{CliError, Result};

/// Environment variable supplying the default master seed.
pub const SEED_ENV_VAR: &str = "WML_SEED";

const DEFAULT_SEED: u64 = 7_777_777;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Verify,
    Scaling,
    Typical,
    Worstcase,
    Bounds,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Scaling => "scaling",
            Command::Typical => "typical",
            Command::Worstcase => "worstcase",
            Command::Bounds => "bounds",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::usage(format!("unknown format '{other}'"))),
        }
    }
}

/// Unresolved options from flags or the JSON config file; `None` means
/// "fall through to the next precedence level".
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub d: Option<usize>,
    pub d_list: Option<Vec<usize>>,
    pub t: Option<f64>,
    pub n_grid: Option<Vec<u64>>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub method: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

impl PartialConfig {
    /// Field-wise precedence: `self` wins over `lower`.
    pub fn or(self, lower: PartialConfig) -> PartialConfig {
        PartialConfig {
            d: self.d.or(lower.d),
            d_list: self.d_list.or(lower.d_list),
            t: self.t.or(lower.t),
            n_grid: self.n_grid.or(lower.n_grid),
            eps: self.eps.or(lower.eps),
            delta: self.delta.or(lower.delta),
            trials: self.trials.or(lower.trials),
            seed: self.seed.or(lower.seed),
            method: self.method.or(lower.method),
            out: self.out.or(lower.out),
            format: self.format.or(lower.format),
        }
    }

    pub fn from_json_file(path: &PathBuf) -> Result<PartialConfig> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Fully resolved, validated experiment parameters.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub command: Command,
    pub d: usize,
    pub d_list: Vec<usize>,
    pub t: f64,
    pub n_grid: Vec<u64>,
    pub eps: f64,
    pub delta: f64,
    pub trials: usize,
    pub seed: RngSeed,
    pub method: WmlStepMethod,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    /// Applies precedence (explicit > env seed > per-command defaults) and
    /// validates every numeric domain before any computation starts.
    pub fn resolve(command: Command, options: PartialConfig) -> Result<ExperimentConfig> {
        let env_seed = std::env::var(SEED_ENV_VAR)
            .ok()
            .map(|s| {
                s.parse::<u64>()
                    .map_err(|_| CliError::usage(format!("{SEED_ENV_VAR} must be a u64")))
            })
            .transpose()?;

        let d = options.d.unwrap_or(2);
        let d_list = options.d_list.unwrap_or_else(|| default_d_list(command));
        let t = options.t.unwrap_or(1.0);
        let n_grid = options
            .n_grid
            .unwrap_or_else(|| vec![32, 64, 128, 256, 512, 1024]);
        let eps = options.eps.unwrap_or(0.1);
        let delta = options.delta.unwrap_or(0.5);
        let trials = options.trials.unwrap_or(1000);
        let seed = RngSeed::new(options.seed.or(env_seed).unwrap_or(DEFAULT_SEED));
        let method = match &options.method {
            Some(name) => WmlStepMethod::from_str(name)
                .map_err(|e| CliError::usage(e.to_string()))?,
            None => WmlStepMethod::Analytic,
        };
        let format = match &options.format {
            Some(name) => name.parse()?,
            None => OutputFormat::Csv,
        };

        let config = ExperimentConfig {
            command,
            d,
            d_list,
            t,
            n_grid,
            eps,
            delta,
            trials,
            seed,
            method,
            out: options.out,
            format,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(CliError::usage("--d must be at least 2"));
        }
        if self.d_list.is_empty() || self.d_list.iter().any(|&d| d < 2) {
            return Err(CliError::usage("--d-list entries must be at least 2"));
        }
        if self.t < 0.0 || !self.t.is_finite() {
            return Err(CliError::usage("--t must be a nonnegative finite real"));
        }
        if self.n_grid.is_empty() || self.n_grid.contains(&0) {
            return Err(CliError::usage("--n-grid entries must be positive"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::usage("--n-grid must be strictly ascending"));
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return Err(CliError::usage("--eps must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(CliError::usage("--delta must lie in (0, 1)"));
        }
        if self.trials == 0 {
            return Err(CliError::usage("--trials must be at least 1"));
        }
        Ok(())
    }

    /// Short hash of the resolved numeric parameters; rows echo it so any
    /// row can be re-derived in isolation.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "command={};d={};d_list={:?};t={};n_grid={:?};eps={};delta={};trials={};seed={};method={}",
            self.command.name(),
            self.d,
            self.d_list,
            self.t,
            self.n_grid,
            self.eps,
            self.delta,
            self.trials,
            self.seed.master,
            self.method,
        );
        let digest = Sha256::digest(canonical.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        hex[..16].to_string()
    }
}

fn default_d_list(command: Command) -> Vec<usize> {
    match command {
        Command::Scaling => vec![2, 3],
        Command::Typical => vec![16, 32, 64],
        Command::Worstcase => vec![2, 3, 4, 8, 16, 32, 64],
        Command::Bounds => vec![2, 3, 4, 8, 16, 32, 64],
        Command::Verify => vec![2],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let cfg = ExperimentConfig::resolve(Command::Scaling, PartialConfig::default()).unwrap();
        assert_eq!(cfg.d_list, vec![2, 3]);
        assert_eq!(cfg.method, WmlStepMethod::Analytic);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.n_grid, vec![32, 64, 128, 256, 512, 1024]);
    }

    #[test]
    fn flags_override_file() {
        let file = PartialConfig {
            eps: Some(0.2),
            trials: Some(7),
            ..Default::default()
        };
        let flags = PartialConfig {
            eps: Some(0.05),
            ..Default::default()
        };
        let merged = flags.or(file);
        let cfg = ExperimentConfig::resolve(Command::Bounds, merged).unwrap();
        assert_eq!(cfg.eps, 0.05);
        assert_eq!(cfg.trials, 7);
    }

    #[test]
    fn validation_rejects_bad_domains() {
        let bad = |p: PartialConfig| ExperimentConfig::resolve(Command::Scaling, p).is_err();
        assert!(bad(PartialConfig {
            eps: Some(1.5),
            ..Default::default()
        }));
        assert!(bad(PartialConfig {
            n_grid: Some(vec![64, 32]),
            ..Default::default()
        }));
        assert!(bad(PartialConfig {
            d: Some(1),
            ..Default::default()
        }));
        assert!(bad(PartialConfig {
            method: Some("fancy".into()),
            ..Default::default()
        }));
    }

    #[test]
    fn hash_tracks_parameters() {
        let a = ExperimentConfig::resolve(Command::Bounds, PartialConfig::default()).unwrap();
        let opts = PartialConfig {
            eps: Some(0.07),
            ..Default::default()
        };
        let b = ExperimentConfig::resolve(Command::Bounds, opts).unwrap();
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
