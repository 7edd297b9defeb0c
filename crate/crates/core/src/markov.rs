//! Born-Markov baseline: exponential relaxation to the Gibbs populations.

use std::sync::Arc;

use crate::energetics::EngineParams;
use crate::error::{OttoError, Result};
use crate::kernels::{ohmic_j, ReservoirSpec};
use crate::quad::uniform_grid;
use crate::scalar::Real;
use crate::tcl2::{default_step, StrokeSolution, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovStroke<T> {
    pub reservoir: ReservoirSpec<T>,
    pub splitting: T,
    pub rho00_init: T,
    pub duration: T,
}

impl<T: Real> MarkovStroke<T> {
    pub fn new(
        reservoir: ReservoirSpec<T>,
        splitting: T,
        rho00_init: T,
        duration: T,
    ) -> Result<Self> {
        if !(splitting > T::zero()) {
            return Err(OttoError::InvalidParams(format!(
                "level splitting must be positive, got {splitting}"
            )));
        }
        if !(rho00_init >= T::zero() && rho00_init <= T::one()) {
            return Err(OttoError::InvalidParams(format!(
                "initial population must lie in [0, 1], got {rho00_init}"
            )));
        }
        if !(duration >= T::zero()) {
            return Err(OttoError::InvalidParams(format!(
                "stroke duration must be non-negative, got {duration}"
            )));
        }
        Ok(Self {
            reservoir,
            splitting,
            rho00_init,
            duration,
        })
    }
}

/// Bose-Einstein occupation `1/(e^{ω/T} − 1)`.
pub fn bose_n<T: Real>(omega: T, temperature: T) -> Result<T> {
    if !(omega > T::zero()) || !(temperature > T::zero()) {
        return Err(OttoError::Domain(format!(
            "bose occupation needs omega > 0 and T > 0, got omega = {omega}, T = {temperature}"
        )));
    }
    Ok((omega / temperature).exp_m1().recip())
}

/// Gibbs ground population `(1+n)/(1+2n) = 1/(1+e^{−ω/T})`.
pub fn stationary_rho00<T: Real>(omega: T, temperature: T) -> T {
    (T::one() + (-omega / temperature).exp()).recip()
}

/// Relaxation rate `2π J(ω) (1 + 2n(ω))`.
pub fn relaxation_rate<T: Real>(omega: T, spec: &ReservoirSpec<T>) -> Result<T> {
    let j = ohmic_j(omega, spec)?;
    let coth = (omega / (T::lit(2.0) * spec.temperature)).tanh().recip();
    Ok(T::lit(2.0) * T::PI() * j * coth)
}

pub fn markov_rho00<T: Real>(t: T, stroke: &MarkovStroke<T>) -> Result<T> {
    if t < T::zero() {
        return Err(OttoError::Domain(format!("time must be >= 0, got {t}")));
    }
    let target = stationary_rho00(stroke.splitting, stroke.reservoir.temperature);
    let rate = relaxation_rate(stroke.splitting, &stroke.reservoir)?;
    Ok(target + (stroke.rho00_init - target) * (-rate * t).exp())
}

/// Markovian stroke in the common `ρ00' = a ρ00 − b` form with constant
/// `a = −γ`, `b = −γ ρ∞`, sampled on a grid over `[0, duration]`.
pub fn markov_solution<T: Real>(
    reservoir: &ReservoirSpec<T>,
    splitting: T,
    duration: T,
    step: T,
) -> Result<StrokeSolution<T>> {
    if !(splitting > T::zero()) || !(duration > T::zero()) || !(step > T::zero()) {
        return Err(OttoError::InvalidParams(format!(
            "markov stroke needs positive splitting, duration and step (got {splitting}, {duration}, {step})"
        )));
    }
    let rate = relaxation_rate(splitting, reservoir)?;
    let target = stationary_rho00(splitting, reservoir.temperature);
    let (times, h) = uniform_grid(duration, step);
    let a = vec![-rate; times.len()];
    let b = vec![-rate * target; times.len()];
    let cum_a: Vec<T> = times.iter().map(|&t| -rate * t).collect();
    // ρ(t) = e^{−γt} ρ(0) + ρ∞ (1 − e^{−γt})
    let offset = cum_a.iter().map(|&x| target * x.exp_m1()).collect();
    Ok(StrokeSolution::from_closed_form(
        splitting, times, h, a, b, cum_a, offset,
    ))
}

/// Samples [`markov_rho00`] on the default grid.
pub fn evolve_markov<T: Real>(stroke: &MarkovStroke<T>) -> Result<Trajectory<T>> {
    let sol = markov_solution(
        &stroke.reservoir,
        stroke.splitting,
        stroke.duration,
        default_step(stroke.duration),
    )?;
    Arc::new(sol).trajectory(stroke.rho00_init)
}

/// Positive Markovian work is possible iff `ω_c/ω_h > T_c/T_h`, i.e. iff the
/// Otto efficiency stays below Carnot. Equality yields no work.
pub fn positive_work_condition<T: Real>(params: &EngineParams<T>) -> bool {
    params.omega_c / params.omega_h > params.temp_c / params.temp_h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bose_values() {
        let t = 1.7f64;
        assert!((bose_n(t * 2f64.ln(), t).unwrap() - 1.0).abs() < 1e-14);
        assert!(bose_n(800.0f64, 1.0).unwrap() < 1e-300);
        // e^{0.18} - 1 = 0.197217...
        let n = bose_n(0.18f64, 1.0).unwrap();
        assert!((n - 1.0 / 0.18f64.exp_m1()).abs() < 1e-15);
        assert!((n - 5.0705).abs() < 1e-4);
        assert!(bose_n(0.0, 1.0).is_err());
        assert!(bose_n(1.0, -1.0).is_err());
    }

    #[test]
    fn stationary_matches_bose_form() {
        let n = bose_n(0.18f64, 1.0).unwrap();
        let direct = (1.0 + n) / (1.0 + 2.0 * n);
        assert!((stationary_rho00(0.18f64, 1.0) - direct).abs() < 1e-15);
        assert!((direct - 0.5449).abs() < 1e-4);
        assert!((stationary_rho00(50.0f64, 0.01) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn relaxation_endpoints() {
        let spec = ReservoirSpec::new(1.0, 0.01, 0.4).unwrap();
        let s = MarkovStroke::new(spec, 0.18, 0.9, 10.0).unwrap();
        assert_eq!(markov_rho00(0.0, &s).unwrap(), 0.9);
        let late = markov_rho00(1e5, &s).unwrap();
        assert!((late - stationary_rho00(0.18f64, 1.0)).abs() < 1e-14);
    }

    #[test]
    fn grid_solution_matches_closed_form() {
        let spec = ReservoirSpec::new(5.0, 0.01, 0.4).unwrap();
        let s = MarkovStroke::new(spec, 1.0f64, 0.2, 30.0).unwrap();
        let traj = evolve_markov(&s).unwrap();
        for (t, r) in traj.times().iter().zip(traj.rho00()) {
            let exact = markov_rho00(*t, &s).unwrap();
            assert!((r - exact).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn positive_work_examples() {
        let mut p = EngineParams::<f64>::reference_point();
        assert!(!positive_work_condition(&p));
        assert!(p.otto_efficiency() > p.carnot_efficiency());
        p.omega_c = 0.25;
        assert!(positive_work_condition(&p));
        p.omega_c = 0.2;
        assert!(
            !positive_work_condition(&p),
            "equality gives no positive work"
        );
        p.omega_c = p.omega_h;
        assert!(positive_work_condition(&p));
        p.temp_c = p.temp_h;
        assert!(!positive_work_condition(&p));
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(
            rho0 in 0.0f64..=1.0,
            omega in 0.05f64..3.0,
            temp in 0.1f64..10.0,
            lambda in 0.001f64..0.05,
            cutoff in 0.1f64..10.0,
        ) {
            let spec = ReservoirSpec::new(temp, lambda, cutoff).unwrap();
            let s = MarkovStroke::new(spec, omega, rho0, 50.0).unwrap();
            let inf = stationary_rho00(omega, temp);
            let (lo, hi) = (rho0.min(inf), rho0.max(inf));
            let mut prev = rho0;
            for k in 0..=100 {
                let r = markov_rho00(k as f64 * 0.5, &s).unwrap();
                prop_assert!(r >= lo - 1e-15 && r <= hi + 1e-15);
                if inf >= rho0 { prop_assert!(r >= prev - 1e-15) } else { prop_assert!(r <= prev + 1e-15) }
                prev = r;
            }
        }
    }
}
