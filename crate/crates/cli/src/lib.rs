//! Configuration, orchestration, and CSV output for the Otto engine
//! simulator: single-stroke dynamics, duration and frequency sweeps, and
//! comparison against the exact few-mode model.

pub mod config;
pub mod error;
pub mod runs;

pub use config::{OracleSettings, RunConfig, SweepRange};
pub use error::{CliError, CliResult};
pub use runs::{fmt_value, run_dynamics, run_oracle, run_sweep, sweep_points, Report, SweepPoint};
