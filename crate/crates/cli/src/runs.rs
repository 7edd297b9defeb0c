//! The three subcommands as pure functions from a configuration to CSV text.

use std::sync::Arc;

use otto_core::cycle::{checked_map, stroke_solution};
use otto_core::oracle::TruncationWarning;
use otto_core::tcl2::default_step;
use otto_core::{
    discretize_bath, effective_temperature, evaluate_with_solutions, exact_evolve, limit_cycle,
    Bath, DiagonalState64, EnergyLedger64, EngineParams64, StrokeEnergetics, StrokeSolution64,
};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// CSV text plus any warnings meant for standard error.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub csv: String,
    pub warnings: Vec<String>,
}

/// Twelve significant digits; `-0` prints as `0`.
pub fn fmt_value(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else if v == 0.0 {
        format!("{:.11e}", 0.0)
    } else {
        format!("{v:.11e}")
    }
}

fn push_row(csv: &mut String, fields: &[String]) {
    csv.push_str(&fields.join(","));
    csv.push('\n');
}

fn thread_pool(workers: usize) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {workers} workers: {e}")))
}

fn hot_and_cold(
    engine: &EngineParams64,
    cfg: &RunConfig,
) -> CliResult<(Arc<StrokeSolution64>, Arc<StrokeSolution64>)> {
    let hot = Arc::new(stroke_solution(engine, Bath::Hot, cfg.backend, cfg.step)?);
    let cold = Arc::new(stroke_solution(engine, Bath::Cold, cfg.backend, cfg.step)?);
    Ok((hot, cold))
}

fn limit_p_hot(hot: &Arc<StrokeSolution64>, cold: &Arc<StrokeSolution64>) -> CliResult<f64> {
    let cycle = limit_cycle(&checked_map(hot)?, &checked_map(cold)?)?;
    Ok(cycle.p_hot)
}

pub const DYNAMICS_HEADER: &str = "t,rho00,rho11,T_eff,dES,dEB,EI,theta";

/// Hot-stroke time series on the limit cycle, or from `rho00_init` when set.
pub fn run_dynamics(cfg: &RunConfig) -> CliResult<Report> {
    cfg.validate()?;
    let engine = cfg.engine;
    let hot = Arc::new(stroke_solution(&engine, Bath::Hot, cfg.backend, cfg.step)?);
    let start = match cfg.rho00_init {
        Some(r) => r,
        None => {
            let cold = Arc::new(stroke_solution(&engine, Bath::Cold, cfg.backend, cfg.step)?);
            limit_p_hot(&hot, &cold)?
        }
    };
    let traj = hot.trajectory(start)?;
    let e = StrokeEnergetics::from_trajectory(&traj);

    let mut csv = String::new();
    csv.push_str(DYNAMICS_HEADER);
    csv.push('\n');
    for k in 0..e.times.len() {
        let r = e.rho00[k];
        let t_eff = effective_temperature(r, 1.0 - r, engine.omega_h).unwrap_or(f64::NAN);
        let row = [
            e.times[k],
            r,
            1.0 - r,
            t_eff,
            e.system_change[k],
            e.reservoir_change[k],
            e.interaction[k],
            e.flow[k],
        ];
        push_row(&mut csv, &row.map(fmt_value));
    }
    Ok(Report {
        csv,
        warnings: Vec::new(),
    })
}

/// One grid point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub engine: EngineParams64,
    pub outcome: Result<EnergyLedger64, String>,
}

type StrokeCache = Vec<Result<Arc<StrokeSolution64>, String>>;

fn stroke_cache(
    cfg: &RunConfig,
    engine: &EngineParams64,
    which: Bath,
    durations: &[f64],
) -> StrokeCache {
    durations
        .par_iter()
        .map(|&d| {
            let mut e = *engine;
            match which {
                Bath::Hot => e.t1 = d,
                Bath::Cold => e.t2 = d,
            }
            stroke_solution(&e, which, cfg.backend, cfg.step)
                .map(Arc::new)
                .map_err(|err| err.to_string())
        })
        .collect()
}

/// Every `(ω pair, t1, t2)` point in output order. Each stroke is solved
/// once per distinct duration and shared across the points that use it.
pub fn sweep_points(cfg: &RunConfig) -> CliResult<Vec<SweepPoint>> {
    cfg.validate()?;
    let pool = thread_pool(cfg.workers)?;
    let t1s = cfg.t1_range.values();
    let t2s = cfg.t2_range.values();
    pool.install(|| {
        let mut points = Vec::with_capacity(cfg.omega_engines().len() * t1s.len() * t2s.len());
        for engine in cfg.omega_engines() {
            let hot = stroke_cache(cfg, &engine, Bath::Hot, &t1s);
            let cold = stroke_cache(cfg, &engine, Bath::Cold, &t2s);
            let grid: Vec<(usize, usize)> = (0..t1s.len())
                .flat_map(|i| (0..t2s.len()).map(move |j| (i, j)))
                .collect();
            let block: Vec<SweepPoint> = grid
                .par_iter()
                .map(|&(i, j)| {
                    let point = EngineParams64 {
                        t1: t1s[i],
                        t2: t2s[j],
                        ..engine
                    };
                    let outcome = match (&hot[i], &cold[j]) {
                        (Ok(h), Ok(c)) => evaluate_with_solutions(&point, h, c)
                            .map(|eval| eval.ledger)
                            .map_err(|err| err.to_string()),
                        (Err(err), _) | (_, Err(err)) => Err(err.clone()),
                    };
                    SweepPoint {
                        engine: point,
                        outcome,
                    }
                })
                .collect();
            points.extend(block);
        }
        Ok(points)
    })
}

pub const SWEEP_HEADER: &str = "t1,t2,W_ad1,W_ad2,W_I,W_II,eta_O,eta_C,error";

/// `(t1, t2)` grid, t1-major. With an `omega_pairs` list the rows gain
/// leading `omega_h, omega_c` columns and repeat the grid per pair.
pub fn run_sweep(cfg: &RunConfig) -> CliResult<Report> {
    let points = sweep_points(cfg)?;
    let with_omegas = !cfg.omega_pairs.is_empty();
    let mut csv = String::new();
    if with_omegas {
        csv.push_str("omega_h,omega_c,");
    }
    csv.push_str(SWEEP_HEADER);
    csv.push('\n');
    let mut failures = 0;
    for p in &points {
        let e = &p.engine;
        let mut fields = Vec::with_capacity(11);
        if with_omegas {
            fields.push(fmt_value(e.omega_h));
            fields.push(fmt_value(e.omega_c));
        }
        fields.push(fmt_value(e.t1));
        fields.push(fmt_value(e.t2));
        match &p.outcome {
            Ok(l) => {
                for v in [
                    l.work_ad1,
                    l.work_ad2,
                    l.work_i,
                    l.work_ii,
                    l.eta_otto,
                    l.eta_carnot,
                ] {
                    fields.push(fmt_value(v));
                }
                fields.push(String::new());
            }
            Err(msg) => {
                failures += 1;
                fields.extend(std::iter::repeat_n(String::new(), 4));
                fields.push(fmt_value(e.otto_efficiency()));
                fields.push(fmt_value(e.carnot_efficiency()));
                fields.push(msg.replace([',', '\n'], ";"));
            }
        }
        push_row(&mut csv, &fields);
    }
    let warnings = if failures > 0 {
        vec![format!(
            "{failures} of {} sweep points failed",
            points.len()
        )]
    } else {
        Vec::new()
    };
    Ok(Report { csv, warnings })
}

pub const ORACLE_HEADER: &str =
    "t,dES_tcl2,dES_exact,dEB_tcl2,dEB_exact,EI_tcl2,EI_exact,truncated";

/// Hot stroke of the configured backend against the few-mode exact model,
/// both started from the same population.
pub fn run_oracle(cfg: &RunConfig) -> CliResult<Report> {
    cfg.validate()?;
    let engine = cfg.engine;
    let samples = cfg.oracle.samples;
    let base = cfg.step.unwrap_or_else(|| default_step(engine.t1));
    let per_sample = (engine.t1 / (samples as f64 * base)).ceil().max(1.0) as usize;
    let step = engine.t1 / (samples * per_sample) as f64;
    let sampled = RunConfig {
        step: Some(step),
        ..cfg.clone()
    };
    let (hot, cold) = hot_and_cold(&engine, &sampled)?;
    let start = match cfg.oracle_rho00 {
        Some(r) => r,
        None => limit_p_hot(&hot, &cold)?,
    };
    let traj = hot.trajectory(start)?;
    let approx = StrokeEnergetics::from_trajectory(&traj);

    let nodes: Vec<usize> = (0..=samples).map(|k| k * per_sample).collect();
    let times: Vec<f64> = nodes.iter().map(|&k| approx.times[k]).collect();
    let bath = discretize_bath(
        &engine.hot_reservoir()?,
        cfg.oracle.modes,
        cfg.oracle.omega_max,
        cfg.oracle.fock_cutoff,
    )?;
    let exact = exact_evolve(
        DiagonalState64::from_ground(start)?,
        engine.omega_h,
        &bath,
        &times,
    )?;

    let flag = if exact.truncation.is_some() { "1" } else { "0" };
    let mut csv = String::new();
    csv.push_str(ORACLE_HEADER);
    csv.push('\n');
    for (row, &k) in nodes.iter().enumerate() {
        let values = [
            times[row],
            approx.system_change[k],
            exact.system_change[row],
            approx.reservoir_change[k],
            exact.reservoir_change[row],
            approx.interaction[k],
            exact.interaction[row],
        ];
        let mut fields: Vec<String> = values.iter().map(|&v| fmt_value(v)).collect();
        fields.push(flag.into());
        push_row(&mut csv, &fields);
    }
    let warnings = exact
        .truncation
        .map(|TruncationWarning { mode, top_population }| {
            vec![format!(
                "truncation: mode {mode} starts with population {top_population:.3e} in its top Fock level"
            )]
        })
        .unwrap_or_default();
    Ok(Report { csv, warnings })
}
