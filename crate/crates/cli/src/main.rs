//! `qsheaf`: lattices, quasipoints, spectral families and sectors from the
//! command line, with JSON or CSV reports.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use qsheaf::Tolerances;
use serde_json::json;

use report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "qsheaf", version, about = "Quasipoints, spectral families and Boolean sectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Global {
    /// Master seed for random batches.
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Largest Hilbert dimension in random batches.
    #[arg(long, global = true, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long, global = true)]
    pub tol_eq: Option<f64>,
    /// Half-width of the λ window for interval families.
    #[arg(long, global = true, default_value_t = 10.0)]
    pub window: f64,
    /// Named tolerance profile: default, strict or loose.
    #[arg(long, global = true, env = "QSHEAF_TOL_PROFILE", default_value = "default")]
    pub tol_profile: String,
    /// Also write the report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Include wall time in the report (reports are then no longer byte-identical).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Points, quasipoints and Stonean bases of a finite lattice.
    Lattice {
        #[arg(value_enum)]
        action: LatticeAction,
        file: PathBuf,
    },
    /// Spectral families of Hermitian matrices.
    Quantum {
        #[arg(value_enum)]
        action: QuantumAction,
        file: PathBuf,
        /// A line as comma-separated entries, each `re` or `re:im`.
        #[arg(long)]
        line: Vec<String>,
        /// Subspace JSON for `restrict`.
        #[arg(long)]
        subspace: Option<PathBuf>,
    },
    /// Boolean sectors: Gelfand tables, state measures and the classical bridge.
    Sector {
        #[arg(value_enum)]
        action: SectorAction,
        /// `I` for the standard basis, or a matrix JSON file.
        #[arg(long)]
        basis: Option<String>,
        /// Operator JSON or matrix JSON.
        #[arg(long)]
        op: Option<PathBuf>,
        /// Density matrix JSON.
        #[arg(long)]
        rho: Option<PathBuf>,
    },
    /// Run the property battery.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LatticeAction {
    Points,
    Quasipoints,
    Stonean,
    Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantumAction {
    Spectral,
    Observable,
    Spectrum,
    Restrict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SectorAction {
    Gelfand,
    Measure,
    Bridge,
    Pointmeasure,
}

fn tolerances(g: &Global) -> anyhow::Result<Tolerances> {
    let mut tol = Tolerances::profile(&g.tol_profile).ok_or_else(|| {
        anyhow::anyhow!("unknown tolerance profile `{}` (expected one of {:?})", g.tol_profile, Tolerances::PROFILES)
    })?;
    if let Some(r) = g.tol_rank {
        tol.rank = r;
    }
    if let Some(e) = g.tol_eq {
        tol.eq = e;
    }
    Ok(tol)
}

fn command_name(c: &Command) -> String {
    let v = |x: &dyn std::fmt::Debug| format!("{x:?}").to_lowercase();
    match c {
        Command::Lattice { action, .. } => format!("lattice {}", v(action)),
        Command::Quantum { action, .. } => format!("quantum {}", v(action)),
        Command::Sector { action, .. } => format!("sector {}", v(action)),
        Command::Verify { suite } => format!("verify {suite}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let g = &cli.global;
    let mut inputs: Vec<Vec<u8>> = Vec::new();
    let result = tolerances(g).and_then(|tol| {
        let config = json!({
            "dim": g.dim,
            "tol_profile": g.tol_profile,
            "tolerances": tol,
            "window": g.window,
        });
        commands::run(&cli.command, g, &tol, &mut inputs).map(|o| (o, config))
    });
    let (outcome, config, error) = match result {
        Ok((o, config)) => (Some(o), config, None),
        Err(e) => (None, json!({}), Some(format!("{e:#}"))),
    };
    let report = RunReport {
        command: command_name(&cli.command),
        digest: report::digest(&inputs),
        seed: g.seed,
        config,
        outcome,
        error,
        wall_time: g.timing.then(|| start.elapsed()),
    };
    let rendered = match g.format {
        Format::Json => Ok(serde_json::to_string_pretty(&report.to_json()).expect("serializable") + "\n"),
        Format::Csv => report.to_csv(),
    };
    let rendered = match rendered {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    print!("{rendered}");
    if let Some(path) = &g.out {
        if let Err(e) = std::fs::write(path, &rendered) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    if let Some(e) = &report.error {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if !report.passed() {
        return ExitCode::from(3);
    }
    ExitCode::SUCCESS
}
