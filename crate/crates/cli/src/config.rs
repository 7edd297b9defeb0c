//! Flat `key = value` run configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Every key has a
//! default, so an empty file is the reference parameter point on a 60×60
//! `(t1, t2)` grid over `[1, 60]`. Optional keys are omitted when unset.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use otto_core::{Dynamics, EngineParams64};

use crate::error::{CliError, CliResult};

/// Inclusive, evenly spaced sample range. `count = 1` yields `min` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl SweepRange {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let span = self.max - self.min;
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|k| {
                if k + 1 == self.count {
                    self.max
                } else {
                    self.min + span * k as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> CliResult<()> {
        if self.count == 0 {
            return Err(CliError::Config(format!("{name}_count must be at least 1")));
        }
        if !(self.min > 0.0 && self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::Config(format!(
                "{name} range must be positive and finite"
            )));
        }
        if self.max < self.min {
            return Err(CliError::Config(format!(
                "{name}_max must not be below {name}_min"
            )));
        }
        Ok(())
    }
}

/// Few-mode exact model settings for the `oracle` subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSettings {
    pub modes: usize,
    pub fock_cutoff: usize,
    pub omega_max: f64,
    /// Output rows after `t = 0`, evenly spaced over the hot stroke.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub engine: EngineParams64,
    pub backend: Dynamics,
    /// Quadrature step; per-stroke default when `None`.
    pub step: Option<f64>,
    pub t1_range: SweepRange,
    pub t2_range: SweepRange,
    /// `(ω_h, ω_c)` pairs; an empty list sweeps the engine's own pair.
    pub omega_pairs: Vec<(f64, f64)>,
    /// Standard output when `None`.
    pub out: Option<PathBuf>,
    pub workers: usize,
    pub oracle: OracleSettings,
    /// Start of the `dynamics` hot stroke instead of the limit cycle.
    pub rho00_init: Option<f64>,
    /// Start of the `oracle` run instead of the limit cycle.
    pub oracle_rho00: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let grid = SweepRange {
            min: 1.0,
            max: 60.0,
            count: 60,
        };
        Self {
            engine: EngineParams64::reference_point(),
            backend: Dynamics::Tcl2,
            step: None,
            t1_range: grid,
            t2_range: grid,
            omega_pairs: Vec::new(),
            out: None,
            workers: 1,
            oracle: OracleSettings {
                modes: 4,
                fock_cutoff: 4,
                omega_max: 2.0,
                samples: 50,
            },
            rho00_init: None,
            oracle_rho00: None,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> CliResult<T> {
    value
        .parse()
        .map_err(|_| CliError::Config(format!("invalid value for {key}: {value:?}")))
}

fn parse_pairs(value: &str) -> CliResult<Vec<(f64, f64)>> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(';')
        .map(|pair| {
            let (h, c) = pair
                .split_once(':')
                .ok_or_else(|| CliError::Config(format!("omega pair {pair:?} is not h:c")))?;
            Ok((
                parse_num("omega_pairs", h.trim())?,
                parse_num("omega_pairs", c.trim())?,
            ))
        })
        .collect()
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> CliResult<()> {
        let v = value.trim();
        let e = &mut self.engine;
        match key.trim() {
            "omega_h" => e.omega_h = parse_num(key, v)?,
            "omega_c" => e.omega_c = parse_num(key, v)?,
            "temp_h" => e.temp_h = parse_num(key, v)?,
            "temp_c" => e.temp_c = parse_num(key, v)?,
            "coupling" => e.coupling = parse_num(key, v)?,
            "cutoff" => e.cutoff = parse_num(key, v)?,
            "t1" => e.t1 = parse_num(key, v)?,
            "t2" => e.t2 = parse_num(key, v)?,
            "backend" => {
                self.backend = v.parse().map_err(|_| {
                    CliError::Config(format!("backend must be tcl2 or markov, got {v:?}"))
                })?
            }
            "step" => self.step = Some(parse_num(key, v)?),
            "t1_min" => self.t1_range.min = parse_num(key, v)?,
            "t1_max" => self.t1_range.max = parse_num(key, v)?,
            "t1_count" => self.t1_range.count = parse_num(key, v)?,
            "t2_min" => self.t2_range.min = parse_num(key, v)?,
            "t2_max" => self.t2_range.max = parse_num(key, v)?,
            "t2_count" => self.t2_range.count = parse_num(key, v)?,
            "omega_pairs" => self.omega_pairs = parse_pairs(v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "workers" => self.workers = parse_num(key, v)?,
            "oracle_modes" => self.oracle.modes = parse_num(key, v)?,
            "oracle_fock_cutoff" => self.oracle.fock_cutoff = parse_num(key, v)?,
            "oracle_omega_max" => self.oracle.omega_max = parse_num(key, v)?,
            "oracle_samples" => self.oracle.samples = parse_num(key, v)?,
            "rho00_init" => self.rho00_init = Some(parse_num(key, v)?),
            "oracle_rho00" => self.oracle_rho00 = Some(parse_num(key, v)?),
            other => return Err(CliError::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> CliResult<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("expected key=value, got {assignment:?}")))?;
        self.set(k, v)
    }

    /// Parses on top of the defaults without validating.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", n + 1)))?;
            cfg.set(k, v)?;
        }
        Ok(cfg)
    }

    pub fn serialize(&self) -> String {
        let e = &self.engine;
        let mut s = String::new();
        let mut put = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("omega_h", &e.omega_h);
        put("omega_c", &e.omega_c);
        put("temp_h", &e.temp_h);
        put("temp_c", &e.temp_c);
        put("coupling", &e.coupling);
        put("cutoff", &e.cutoff);
        put("t1", &e.t1);
        put("t2", &e.t2);
        put("backend", &self.backend);
        if let Some(h) = self.step {
            put("step", &h);
        }
        put("t1_min", &self.t1_range.min);
        put("t1_max", &self.t1_range.max);
        put("t1_count", &self.t1_range.count);
        put("t2_min", &self.t2_range.min);
        put("t2_max", &self.t2_range.max);
        put("t2_count", &self.t2_range.count);
        if !self.omega_pairs.is_empty() {
            let pairs: Vec<String> = self
                .omega_pairs
                .iter()
                .map(|(h, c)| format!("{h}:{c}"))
                .collect();
            put("omega_pairs", &pairs.join(";"));
        }
        if let Some(p) = &self.out {
            put("out", &p.display());
        }
        put("workers", &self.workers);
        put("oracle_modes", &self.oracle.modes);
        put("oracle_fock_cutoff", &self.oracle.fock_cutoff);
        put("oracle_omega_max", &self.oracle.omega_max);
        put("oracle_samples", &self.oracle.samples);
        if let Some(r) = self.rho00_init {
            put("rho00_init", &r);
        }
        if let Some(r) = self.oracle_rho00 {
            put("oracle_rho00", &r);
        }
        s
    }

    pub fn validate(&self) -> CliResult<()> {
        self.engine.validate()?;
        self.t1_range.validate("t1")?;
        self.t2_range.validate("t2")?;
        for &(h, c) in &self.omega_pairs {
            if !(c > 0.0 && h > c && h.is_finite()) {
                return Err(CliError::Config(format!(
                    "omega pair {h}:{c} needs omega_h > omega_c > 0"
                )));
            }
        }
        if let Some(h) = self.step {
            if !(h > 0.0 && h.is_finite()) {
                return Err(CliError::Config(format!("step must be positive, got {h}")));
            }
        }
        if self.workers == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        let o = &self.oracle;
        if o.modes == 0 || o.fock_cutoff < 2 || o.samples == 0 || o.omega_max.is_nan() || o.omega_max <= 0.0 {
            return Err(CliError::Config(
                "oracle needs modes >= 1, fock_cutoff >= 2, samples >= 1, omega_max > 0".into(),
            ));
        }
        for (name, r) in [
            ("rho00_init", self.rho00_init),
            ("oracle_rho00", self.oracle_rho00),
        ] {
            if let Some(r) = r {
                if !(0.0..=1.0).contains(&r) {
                    return Err(CliError::Config(format!(
                        "{name} must lie in [0, 1], got {r}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Engines swept over, one per `(ω_h, ω_c)` pair.
    pub fn omega_engines(&self) -> Vec<EngineParams64> {
        if self.omega_pairs.is_empty() {
            return vec![self.engine];
        }
        self.omega_pairs
            .iter()
            .map(|&(omega_h, omega_c)| EngineParams64 {
                omega_h,
                omega_c,
                ..self.engine
            })
            .collect()
    }
}
