//! Configuration-driven experiment runner.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails (the report is
//! still written), 2 for configuration or precondition errors.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{
    ConstantFamily, ExperimentConfig, ForcingSpec, ManufacturedSpec, MeshConfig, ProblemConfig, RunConfig,
    SchemeChoice, SourceSpec, SourceTermSpec, U0Spec, MAX_MODES,
};
pub use run::{
    run_all, run_constants, run_convergence, run_rates, run_scan, run_solve, run_verify_estimates, Outcome,
};

#[derive(Debug, Parser)]
#[command(name = "tfpe", about = "Time-fractional Fokker-Planck experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Solve and write trajectories.
    Solve,
    /// Check every a priori inequality on the configured problem.
    VerifyEstimates,
    /// Tabulate the explicit constants.
    Constants,
    /// Scan the classical constants over alpha.
    ScanAlpha,
    /// Fit early-time power laws of the derivatives.
    Rates,
    /// Manufactured-solution convergence orders.
    Convergence,
    /// The full reference corpus.
    All,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::VerifyEstimates => "verify-estimates",
            Command::Constants => "constants",
            Command::ScanAlpha => "scan-alpha",
            Command::Rates => "rates",
            Command::Convergence => "convergence",
            Command::All => "all",
        }
    }
}

/// Runs one subcommand and returns the process exit code.
pub fn execute(cli: &Cli) -> ExitCode {
    let result = (|| {
        let path = cli.config.as_ref().ok_or_else(|| crate::Error::Config {
            key: "--config".into(),
            message: "a configuration file is required".into(),
        })?;
        let cfg = ExperimentConfig::load(path)?;
        let out = &cli.out;
        let outcome = match cli.command {
            Command::Solve => run_solve(&cfg, out),
            Command::VerifyEstimates => run_verify_estimates(&cfg, out),
            Command::Constants => run_constants(&cfg, out),
            Command::ScanAlpha => run_scan(&cfg, out),
            Command::Rates => run_rates(&cfg, out),
            Command::Convergence => run_convergence(&cfg, out),
            Command::All => run_all(&cfg, out),
        }?;
        let verdict = if outcome.pass { "all checks passed" } else { "some checks FAILED" };
        let report = format!("tfpe {}: {verdict}\n{}", cli.command.name(), outcome.report);
        std::fs::create_dir_all(out)?;
        std::fs::write(out.join("report.txt"), &report)?;
        Ok::<_, crate::Error>((outcome.pass, report))
    })();
    match result {
        Ok((pass, report)) => {
            if !cli.quiet {
                print!("{report}");
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Parses `std::env::args` and runs.
pub fn main() -> ExitCode {
    execute(&Cli::parse())
}
