//! `forriqp`: forrelation values, IQP circuit simulation, the distinguishing
//! experiment, verification suites and Fourier-growth audits.
//!
//! Exit codes: 0 ok, 1 a check or invariant failed, 2 usage or parse error.

pub mod audit;
pub mod distinguish;
pub mod output;
pub mod phi;
pub mod simulate;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use forriqp_core::iqp::DEFAULT_MAX_QUBITS;
use serde::Serialize;

pub const MAX_QUBITS_ENV: &str = "FORRIQP_MAX_QUBITS";

#[derive(Debug, Parser)]
#[command(name = "forriqp", version, about = "Forrelation and IQP circuit toolkit")]
pub struct Cli {
    /// Master seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Report format [default: json; verify prints one line per check]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Φ, Φ_odd, Φ_even and Φ² of a pair of functions
    Phi(phi::PhiArgs),
    /// Exact output distribution or samples of an IQP circuit
    Simulate(simulate::SimulateArgs),
    /// Monte Carlo experiment separating forrelated from uniform pairs
    Distinguish(distinguish::DistinguishArgs),
    /// Run the verification suites
    Verify(verify::VerifyArgs),
    /// ‖p̂‖₁ audit of a single-query acceptance polynomial
    GrowthAudit(audit::AuditArgs),
}

/// Settings shared by all subcommands.
#[derive(Debug, Clone, Copy)]
pub struct Globals {
    pub seed: u64,
    /// `None` when `--format` was not given.
    pub format: Option<Format>,
    pub max_qubits: usize,
}

/// Rendered output plus whether every check behind it held.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: String,
    pub ok: bool,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Self { body, ok: true }
    }
}

impl Globals {
    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

pub fn max_qubits_from_env() -> anyhow::Result<usize> {
    match std::env::var(MAX_QUBITS_ENV) {
        Err(_) => Ok(DEFAULT_MAX_QUBITS),
        Ok(v) => {
            let m: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{MAX_QUBITS_ENV}={v:?} is not a qubit count"))?;
            if m == 0 || m > 40 {
                bail!("{MAX_QUBITS_ENV} must lie in 1..=40, got {m}");
            }
            Ok(m)
        }
    }
}

pub fn execute(cli: &Cli) -> anyhow::Result<Report> {
    let globals = Globals {
        seed: cli.seed,
        format: cli.format,
        max_qubits: max_qubits_from_env()?,
    };
    match &cli.command {
        Command::Phi(a) => phi::run(a, &globals),
        Command::Simulate(a) => simulate::run(a, &globals),
        Command::Distinguish(a) => distinguish::run(a, &globals),
        Command::Verify(a) => verify::run(a, &globals),
        Command::GrowthAudit(a) => audit::run(a, &globals),
    }
}

pub fn run(cli: Cli) -> ExitCode {
    match execute(&cli) {
        Ok(report) => {
            if let Err(e) = output::emit(&report.body, cli.out.as_deref()) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
