// Copyright 2026 Wavematrix Contributors
// SPDX-License-Identifier: Apache-2.0

//! `wml` — batch experiment runner for single-dissipator Lindbladian
//! simulation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wavematrix_cli::config::{Command, ExperimentConfig, PartialConfig};
use wavematrix_cli::records::{rows_to_string, write_rows_to_path};
use wavematrix_cli::runners;

#[derive(Parser)]
#[command(
    name = "wml",
    version,
    about = "Seeded experiments for wave matrix Lindbladization: identity checks, \
             error scaling, random-ensemble concentration, rank-one worst cases, \
             and sample-complexity bound tables"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Subcommand)]
enum CommandArgs {
    /// Check the closed-form operator identities and print PASS/FAIL lines.
    Verify(CommonArgs),
    /// Sweep the simulation error against the exact channel over a step grid.
    Scaling(CommonArgs),
    /// Ginibre operator-norm concentration and typical-case sample bounds.
    Typical(CommonArgs),
    /// Rank-one adversarial curves with simulator cross-checks.
    Worstcase(CommonArgs),
    /// Sample-complexity bound table.
    Bounds(CommonArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// System dimension (verify).
    #[arg(long)]
    d: Option<usize>,
    /// Dimensions for sweep commands, comma separated.
    #[arg(long = "d-list", value_delimiter = ',')]
    d_list: Option<Vec<usize>>,
    /// Total evolution time.
    #[arg(long)]
    t: Option<f64>,
    /// Step counts, comma separated and ascending.
    #[arg(long = "n-grid", value_delimiter = ',')]
    n_grid: Option<Vec<u64>>,
    /// Target diamond-distance error.
    #[arg(long)]
    eps: Option<f64>,
    /// Failure probability for typical-case statements.
    #[arg(long)]
    delta: Option<f64>,
    /// Monte-Carlo trials per dimension.
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed (also settable via WML_SEED).
    #[arg(long)]
    seed: Option<u64>,
    /// One-step realization: analytic | brute-force | stinespring.
    #[arg(long)]
    method: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json.
    #[arg(long)]
    format: Option<String>,
    /// JSON config file; command-line flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl CommonArgs {
    fn into_partial(self) -> (Option<PathBuf>, PartialConfig) {
        (
            self.config,
            PartialConfig {
                d: self.d,
                d_list: self.d_list,
                t: self.t,
                n_grid: self.n_grid,
                eps: self.eps,
                delta: self.delta,
                trials: self.trials,
                seed: self.seed,
                method: self.method,
                out: self.out,
                format: self.format,
            },
        )
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        CommandArgs::Verify(a) => (Command::Verify, a),
        CommandArgs::Scaling(a) => (Command::Scaling, a),
        CommandArgs::Typical(a) => (Command::Typical, a),
        CommandArgs::Worstcase(a) => (Command::Worstcase, a),
        CommandArgs::Bounds(a) => (Command::Bounds, a),
    };
    match execute(command, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command, args: CommonArgs) -> wavematrix_cli::Result<bool> {
    let (config_path, flags) = args.into_partial();
    let from_file = match &config_path {
        Some(path) => PartialConfig::from_json_file(path)?,
        None => PartialConfig::default(),
    };
    let config = ExperimentConfig::resolve(command, flags.or(from_file))?;
    let output = runners::run(&config)?;

    for line in &output.summary {
        println!("{line}");
    }
    match &config.out {
        Some(path) => {
            write_rows_to_path(&output.rows, config.format, path)?;
            println!("wrote {} rows to {}", output.rows.len(), path.display());
        }
        None => {
            if command != Command::Verify && !output.rows.is_empty() {
                print!("{}", rows_to_string(&output.rows, config.format)?);
            }
        }
    }
    if !output.failures.is_empty() {
        for failure in &output.failures {
            eprintln!("FAIL {failure}");
        }
        return Ok(false);
    }
    Ok(true)
}
