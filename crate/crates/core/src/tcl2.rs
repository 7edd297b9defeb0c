//! Second-order time-convolutionless dynamics of the ground-state population
//! during one isochoric stroke.
//!
//! The population obeys `dρ00/dt = a(t) ρ00 − b(t)` with
//! `a(t) = −2∫_0^t D1(τ) cos(ωτ) dτ` and `b(t) = a(t)/2 − ∫_0^t D2(τ) sin(ωτ) dτ`,
//! whose solution is
//! `ρ00(t) = e^{A(t)} (ρ00(0) − ∫_0^t b(τ) e^{−A(τ)} dτ)`, `A(t) = ∫_0^t a`.
//! The bracket does not depend on the initial population, so one
//! [`StrokeSolution`] serves every initial condition: `ρ00(t) = decay(t) ρ00(0) − offset(t)`.

use std::sync::Arc;

use crate::error::{OttoError, Result};
use crate::kernels::{d1, d2, ReservoirSpec};
use crate::quad::{cumulative_simpson, interval_stencil, uniform_grid};
use crate::scalar::Real;

pub const DEFAULT_POSITIVITY_TOL: f64 = 1e-9;
pub const MAX_DEFAULT_STEP: f64 = 0.01;
pub const MIN_STEPS_PER_STROKE: f64 = 2000.0;

/// `min(0.01, duration / 2000)`.
pub fn default_step<T: Real>(duration: T) -> T {
    T::lit(MAX_DEFAULT_STEP).min(duration / T::lit(MIN_STEPS_PER_STROKE))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeInput<T> {
    pub reservoir: ReservoirSpec<T>,
    /// Level splitting ω held fixed during the stroke.
    pub splitting: T,
    pub rho00_init: T,
    pub duration: T,
    pub step: T,
    pub positivity_tol: T,
}

impl<T: Real> StrokeInput<T> {
    pub fn new(
        reservoir: ReservoirSpec<T>,
        splitting: T,
        rho00_init: T,
        duration: T,
    ) -> Result<Self> {
        let input = Self {
            reservoir,
            splitting,
            rho00_init,
            duration,
            step: default_step(duration),
            positivity_tol: T::lit(DEFAULT_POSITIVITY_TOL),
        };
        input.validate()?;
        Ok(input)
    }

    pub fn with_step(mut self, step: T) -> Result<Self> {
        self.step = step;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        if !(self.splitting > T::zero()) {
            return Err(OttoError::InvalidParams(format!(
                "level splitting must be positive, got {}",
                self.splitting
            )));
        }
        if !(self.duration > T::zero() && self.duration.is_finite()) {
            return Err(OttoError::InvalidParams(format!(
                "stroke duration must be positive, got {}",
                self.duration
            )));
        }
        if !(self.step > T::zero()) {
            return Err(OttoError::InvalidParams(format!(
                "grid step must be positive, got {}",
                self.step
            )));
        }
        if !(self.rho00_init >= T::zero() && self.rho00_init <= T::one()) {
            return Err(OttoError::InvalidParams(format!(
                "initial population must lie in [0, 1], got {}",
                self.rho00_init
            )));
        }
        Ok(())
    }
}

/// Kernel samples on the stroke grid; absent for Markovian strokes.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSamples<T> {
    pub d1: Vec<T>,
    pub d2: Vec<T>,
}

/// Everything about a stroke that does not depend on the initial population.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokeSolution<T> {
    splitting: T,
    step: T,
    times: Vec<T>,
    a_vals: Vec<T>,
    b_vals: Vec<T>,
    cum_a: Vec<T>,
    decay: Vec<T>,
    offset: Vec<T>,
    kernels: Option<KernelSamples<T>>,
    positivity_tol: T,
}

impl<T: Real> StrokeSolution<T> {
    /// Builds the TCL2 coefficients on a uniform grid over `[0, duration]`.
    pub fn tcl2(reservoir: &ReservoirSpec<T>, splitting: T, duration: T, step: T) -> Result<Self> {
        let probe = StrokeInput {
            reservoir: *reservoir,
            splitting,
            rho00_init: T::one(),
            duration,
            step,
            positivity_tol: T::lit(DEFAULT_POSITIVITY_TOL),
        };
        probe.validate()?;

        let (times, h) = uniform_grid(duration, step);
        let kd1: Vec<T> = times.iter().map(|&t| d1(t, reservoir)).collect();
        let kd2: Vec<T> = times.iter().map(|&t| d2(t, reservoir)).collect();
        let two = T::lit(2.0);

        let a_integrand: Vec<T> = times
            .iter()
            .zip(&kd1)
            .map(|(&t, &k)| -two * k * (splitting * t).cos())
            .collect();
        let b_integrand: Vec<T> = times
            .iter()
            .zip(&kd2)
            .map(|(&t, &k)| k * (splitting * t).sin())
            .collect();
        let a_vals = cumulative_simpson(&a_integrand, h);
        let dissipative = cumulative_simpson(&b_integrand, h);
        let b_vals: Vec<T> = a_vals
            .iter()
            .zip(&dissipative)
            .map(|(&a, &c)| a / two - c)
            .collect();

        Ok(Self::from_coefficients(
            splitting,
            times,
            h,
            a_vals,
            b_vals,
            Some(KernelSamples { d1: kd1, d2: kd2 }),
        ))
    }

    /// Assembles a solution from sampled `a(t)`, `b(t)` on a uniform grid.
    pub fn from_coefficients(
        splitting: T,
        times: Vec<T>,
        step: T,
        a_vals: Vec<T>,
        b_vals: Vec<T>,
        kernels: Option<KernelSamples<T>>,
    ) -> Self {
        let n = times.len() - 1;
        let cum_a = cumulative_simpson(&a_vals, step);
        let decay: Vec<T> = cum_a.iter().map(|x| x.exp()).collect();

        // offset_k = e^{A_k} ∫_0^{t_k} b e^{-A}, advanced by the factor
        // e^{A_{k+1} - A_k} plus the interval contribution.
        let mut offset = Vec::with_capacity(n + 1);
        offset.push(T::zero());
        let scale = step / T::lit(12.0);
        for k in 0..n {
            let (s, w) = interval_stencil::<T>(k, n);
            let mut inc = T::zero();
            for (j, &wj) in w.iter().enumerate() {
                let idx = s + j;
                inc += wj * b_vals[idx] * (cum_a[k + 1] - cum_a[idx]).exp();
            }
            let carried = offset[k] * (cum_a[k + 1] - cum_a[k]).exp();
            offset.push(carried + scale * inc);
        }

        Self {
            splitting,
            step,
            times,
            a_vals,
            b_vals,
            cum_a,
            decay,
            offset,
            kernels,
            positivity_tol: T::lit(DEFAULT_POSITIVITY_TOL),
        }
    }

    /// Solution whose propagator is known analytically.
    pub(crate) fn from_closed_form(
        splitting: T,
        times: Vec<T>,
        step: T,
        a_vals: Vec<T>,
        b_vals: Vec<T>,
        cum_a: Vec<T>,
        offset: Vec<T>,
    ) -> Self {
        let decay = cum_a.iter().map(|x| x.exp()).collect();
        Self {
            splitting,
            step,
            times,
            a_vals,
            b_vals,
            cum_a,
            decay,
            offset,
            kernels: None,
            positivity_tol: T::lit(DEFAULT_POSITIVITY_TOL),
        }
    }

    pub fn with_positivity_tol(mut self, tol: T) -> Self {
        self.positivity_tol = tol;
        self
    }

    pub fn splitting(&self) -> T {
        self.splitting
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn duration(&self) -> T {
        *self.times.last().expect("grid has at least three nodes")
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn a_vals(&self) -> &[T] {
        &self.a_vals
    }

    pub fn b_vals(&self) -> &[T] {
        &self.b_vals
    }

    pub fn cum_a(&self) -> &[T] {
        &self.cum_a
    }

    pub fn kernels(&self) -> Option<&KernelSamples<T>> {
        self.kernels.as_ref()
    }

    pub fn rho00_at(&self, k: usize, rho0: T) -> T {
        self.decay[k] * rho0 - self.offset[k]
    }

    pub fn final_rho00(&self, rho0: T) -> T {
        self.rho00_at(self.times.len() - 1, rho0)
    }

    /// Population trajectory from `rho0`, rejecting excursions outside
    /// `[−tol, 1 + tol]`.
    pub fn trajectory(self: &Arc<Self>, rho0: T) -> Result<Trajectory<T>> {
        if !(rho0 >= T::zero() && rho0 <= T::one()) {
            return Err(OttoError::InvalidParams(format!(
                "initial population must lie in [0, 1], got {rho0}"
            )));
        }
        let tol = self.positivity_tol;
        let mut rho00 = Vec::with_capacity(self.times.len());
        for k in 0..self.times.len() {
            let r = self.rho00_at(k, rho0);
            if !(r >= -tol && r <= T::one() + tol) {
                return Err(OttoError::PositivityViolation {
                    time: self.times[k].as_f64(),
                    rho00: r.as_f64(),
                    tolerance: tol.as_f64(),
                });
            }
            rho00.push(r);
        }
        Ok(Trajectory {
            solution: Arc::clone(self),
            rho00,
        })
    }
}

/// Diagonal populations over one stroke plus the coefficients that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    solution: Arc<StrokeSolution<T>>,
    rho00: Vec<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn solution(&self) -> &StrokeSolution<T> {
        &self.solution
    }

    pub fn splitting(&self) -> T {
        self.solution.splitting
    }

    pub fn times(&self) -> &[T] {
        &self.solution.times
    }

    pub fn rho00(&self) -> &[T] {
        &self.rho00
    }

    pub fn rho11(&self) -> Vec<T> {
        self.rho00.iter().map(|&r| T::one() - r).collect()
    }

    pub fn cum_a(&self) -> &[T] {
        &self.solution.cum_a
    }

    pub fn a_vals(&self) -> &[T] {
        &self.solution.a_vals
    }

    pub fn b_vals(&self) -> &[T] {
        &self.solution.b_vals
    }

    pub fn len(&self) -> usize {
        self.rho00.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rho00.is_empty()
    }

    pub fn initial_rho00(&self) -> T {
        self.rho00[0]
    }

    pub fn final_rho00(&self) -> T {
        *self.rho00.last().expect("non-empty trajectory")
    }

    /// Grid index of time `t`; `t` must sit on a node.
    pub fn index_of(&self, t: T) -> Result<usize> {
        let h = self.solution.step;
        let k = (t / h).round();
        let idx = k.to_usize().filter(|&i| i < self.len());
        match idx {
            Some(i) if (self.times()[i] - t).abs() <= h * T::lit(1e-6) => Ok(i),
            _ => Err(OttoError::Domain(format!(
                "time {t} is not a node of the stroke grid"
            ))),
        }
    }
}

/// `a(t)` on the grid implied by `input.step`.
pub fn coeff_a<T: Real>(t: T, input: &StrokeInput<T>) -> Result<T> {
    if t < T::zero() {
        return Err(OttoError::Domain(format!(
            "coefficient time must be >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    let sol = StrokeSolution::tcl2(&input.reservoir, input.splitting, t, input.step)?;
    Ok(*sol.a_vals.last().expect("non-empty"))
}

/// `b(t)` on the grid implied by `input.step`.
pub fn coeff_b<T: Real>(t: T, input: &StrokeInput<T>) -> Result<T> {
    if t < T::zero() {
        return Err(OttoError::Domain(format!(
            "coefficient time must be >= 0, got {t}"
        )));
    }
    if t == T::zero() {
        return Ok(T::zero());
    }
    let sol = StrokeSolution::tcl2(&input.reservoir, input.splitting, t, input.step)?;
    Ok(*sol.b_vals.last().expect("non-empty"))
}

/// Evolves the ground-state population through one stroke.
pub fn evolve_diagonal<T: Real>(input: &StrokeInput<T>) -> Result<Trajectory<T>> {
    input.validate()?;
    let sol = StrokeSolution::tcl2(
        &input.reservoir,
        input.splitting,
        input.duration,
        input.step,
    )?
    .with_positivity_tol(input.positivity_tol);
    Arc::new(sol).trajectory(input.rho00_init)
}
