use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use otto_cli::{run_dynamics, run_oracle, run_sweep, CliError, CliResult, Report, RunConfig};

#[derive(Parser)]
#[command(
    name = "otto",
    version,
    about = "Non-Markovian quantum Otto engine simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hot-stroke populations, energies and energy flow on the limit cycle.
    Dynamics(Common),
    /// Work and efficiencies over a (t1, t2) grid, optionally per (omega_h, omega_c) pair.
    Sweep(Common),
    /// Hot-stroke energies against the exact few-mode model.
    Oracle(Common),
}

#[derive(Args)]
struct Common {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// tcl2 or markov.
    #[arg(long)]
    backend: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Override one configuration key, e.g. `--set t1=3`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

impl Common {
    fn load(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read {}: {e}", path.display()))
                })?;
                RunConfig::parse(&text)?
            }
            None => RunConfig::default(),
        };
        for o in &self.overrides {
            cfg.apply_override(o)?;
        }
        if let Some(b) = &self.backend {
            cfg.set("backend", b)?;
        }
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        if let Some(p) = &self.out {
            cfg.out = Some(p.clone());
        }
        Ok(cfg)
    }
}

fn emit(cfg: &RunConfig, report: &Report) -> CliResult<()> {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match &cfg.out {
        Some(path) => fs::write(path, &report.csv)?,
        None => std::io::stdout().lock().write_all(report.csv.as_bytes())?,
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    let (common, job): (&Common, fn(&RunConfig) -> CliResult<Report>) = match &cli.command {
        Command::Dynamics(c) => (c, run_dynamics),
        Command::Sweep(c) => (c, run_sweep),
        Command::Oracle(c) => (c, run_oracle),
    };
    let cfg = common.load()?;
    let report = job(&cfg)?;
    emit(&cfg, &report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
