//! Energy bookkeeping on the limit cycle.
//!
//! During a stroke the reservoir energy change is assembled from two pieces:
//! the population-weighted system energy change (with opposite sign) and the
//! correction integral
//! `I(t) = ∫_0^t [(2ρ00(τ) − 1) D1(τ) sin(ωτ) + D2(τ) cos(ωτ)] dτ`.
//! Conservation then fixes the interaction energy to `E_I = −I`, which the
//! exact few-mode oracle confirms is negative at the reference parameters.
//! Markovian strokes carry no kernel samples and therefore no interaction
//! energy.

use std::sync::Arc;

use crate::cycle::{
    checked_map, limit_cycle, stroke_solution, Bath, Dynamics, LimitCycle, StrokeMap,
};
use crate::error::{OttoError, Result};
use crate::kernels::ReservoirSpec;
use crate::quad::cumulative_simpson;
use crate::scalar::Real;
use crate::tcl2::{StrokeSolution, Trajectory};

/// Physical and protocol constants of one engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineParams<T> {
    pub omega_h: T,
    pub omega_c: T,
    pub temp_h: T,
    pub temp_c: T,
    pub coupling: T,
    pub cutoff: T,
    /// Hot-stroke duration.
    pub t1: T,
    /// Cold-stroke duration.
    pub t2: T,
}

impl<T: Real> EngineParams<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_h: T,
        omega_c: T,
        temp_h: T,
        temp_c: T,
        coupling: T,
        cutoff: T,
        t1: T,
        t2: T,
    ) -> Result<Self> {
        let p = Self {
            omega_h,
            omega_c,
            temp_h,
            temp_c,
            coupling,
            cutoff,
            t1,
            t2,
        };
        p.validate()?;
        Ok(p)
    }

    /// `T_h = 5`, `T_c = 1`, `λ = 0.01`, `Ω = 0.4`, `ω_h = 1`, `ω_c = 0.18`,
    /// `t1 = 5`, `t2 = 60`.
    pub fn reference_point() -> Self {
        Self {
            omega_h: T::one(),
            omega_c: T::lit(0.18),
            temp_h: T::lit(5.0),
            temp_c: T::one(),
            coupling: T::lit(0.01),
            cutoff: T::lit(0.4),
            t1: T::lit(5.0),
            t2: T::lit(60.0),
        }
    }

    /// Checks `ω_h > ω_c > 0`, `T_h > T_c > 0`, `λ ≥ 0` and positive `Ω, t1, t2`.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(OttoError::InvalidParams(msg));
        if !(self.omega_c > T::zero() && self.omega_h > self.omega_c) {
            return bad(format!(
                "need omega_h > omega_c > 0, got {} and {}",
                self.omega_h, self.omega_c
            ));
        }
        if !(self.temp_c > T::zero() && self.temp_h > self.temp_c) {
            return bad(format!(
                "need T_h > T_c > 0, got {} and {}",
                self.temp_h, self.temp_c
            ));
        }
        if !(self.coupling >= T::zero() && self.coupling.is_finite()) {
            return bad(format!(
                "coupling must be non-negative, got {}",
                self.coupling
            ));
        }
        for (name, v) in [("cutoff", self.cutoff), ("t1", self.t1), ("t2", self.t2)] {
            if !(v > T::zero() && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        Ok(())
    }

    pub fn hot_reservoir(&self) -> Result<ReservoirSpec<T>> {
        ReservoirSpec::new(self.temp_h, self.coupling, self.cutoff)
    }

    pub fn cold_reservoir(&self) -> Result<ReservoirSpec<T>> {
        ReservoirSpec::new(self.temp_c, self.coupling, self.cutoff)
    }

    pub fn otto_efficiency(&self) -> T {
        T::one() - self.omega_c / self.omega_h
    }

    pub fn carnot_efficiency(&self) -> T {
        T::one() - self.temp_c / self.temp_h
    }
}

/// Energies of one converged cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyLedger<T> {
    pub work_ad1: T,
    pub work_ad2: T,
    pub work_i: T,
    pub work_ii: T,
    pub interaction_hot: T,
    pub interaction_cold: T,
    pub system_change_hot: T,
    pub system_change_cold: T,
    pub reservoir_change_hot: T,
    pub reservoir_change_cold: T,
    pub eta_otto: T,
    pub eta_carnot: T,
}

/// Works done during the two adiabatic strokes. Excited populations are
/// taken right after the projection closing each isochoric stroke.
pub fn work_adiabatic<T: Real>(
    engine: &EngineParams<T>,
    p_hot: T,
    p_cold: T,
    hot: &StrokeSolution<T>,
    cold: &StrokeSolution<T>,
) -> (T, T) {
    let one = T::one();
    let gap = engine.omega_h - engine.omega_c;
    let excited_after = |sol: &StrokeSolution<T>, p: T| {
        let from_ground = one - sol.final_rho00(one);
        let from_excited = one - sol.final_rho00(T::zero());
        p * from_ground + (one - p) * from_excited
    };
    (
        gap * excited_after(hot, p_hot),
        gap * excited_after(cold, p_cold),
    )
}

/// Adiabatic works on the limit cycle of two stroke maps, for protocols
/// given only through their maps (e.g. full thermalization).
pub fn work_from_maps<T: Real>(
    engine: &EngineParams<T>,
    hot: &StrokeMap<T>,
    cold: &StrokeMap<T>,
) -> Result<(T, T)> {
    let limit = limit_cycle(hot, cold)?;
    let gap = engine.omega_h - engine.omega_c;
    let one = T::one();
    Ok((
        gap * (one - hot.apply(limit.p_hot)),
        gap * (one - cold.apply(limit.p_cold)),
    ))
}

pub fn work_net_i<T: Real>(work_ad1: T, work_ad2: T) -> T {
    work_ad1 - work_ad2
}

/// Net work including the cost of detaching against the interaction.
pub fn work_net_ii<T: Real>(work_i: T, interaction_hot: T, interaction_cold: T) -> T {
    work_i + interaction_hot + interaction_cold
}

/// Integrand of the correction integral at every node.
fn correction_integrand<T: Real>(traj: &Trajectory<T>) -> Vec<T> {
    let Some(k) = traj.solution().kernels() else {
        return vec![T::zero(); traj.len()];
    };
    let w = traj.splitting();
    let two = T::lit(2.0);
    traj.times()
        .iter()
        .zip(traj.rho00())
        .zip(k.d1.iter().zip(&k.d2))
        .map(|((&t, &r), (&d1, &d2))| {
            (two * r - T::one()) * d1 * (w * t).sin() + d2 * (w * t).cos()
        })
        .collect()
}

fn correction_integral<T: Real>(traj: &Trajectory<T>) -> Vec<T> {
    if traj.solution().kernels().is_none() {
        return vec![T::zero(); traj.len()];
    }
    cumulative_simpson(&correction_integrand(traj), traj.solution().step())
}

/// `ΔE_S(t) = ω (ρ11(t) − ρ11(0))`.
pub fn system_energy_change<T: Real>(traj: &Trajectory<T>, t: T) -> Result<T> {
    let k = traj.index_of(t)?;
    Ok(traj.splitting() * (traj.rho00()[0] - traj.rho00()[k]))
}

/// `ΔE_B(t) = −ω (ρ11(t) − ρ11(0)) + I(t)`.
pub fn reservoir_energy_change<T: Real>(traj: &Trajectory<T>, t: T) -> Result<T> {
    let k = traj.index_of(t)?;
    let population = traj.splitting() * (traj.rho00()[k] - traj.rho00()[0]);
    Ok(population + correction_integral(traj)[k])
}

/// `E_I(t) = −ΔE_S − ΔE_B = −I(t)`.
pub fn interaction_energy<T: Real>(traj: &Trajectory<T>, t: T) -> Result<T> {
    let k = traj.index_of(t)?;
    Ok(-correction_integral(traj)[k])
}

/// `θ(t) = dΔE_B/dt`, evaluated from the generator rather than by
/// differencing: `ω (a ρ00 − b)` plus the correction integrand.
/// Positive when energy flows into the reservoir.
pub fn energy_flow<T: Real>(traj: &Trajectory<T>) -> Vec<(T, T)> {
    let w = traj.splitting();
    let integrand = correction_integrand(traj);
    (0..traj.len())
        .map(|k| {
            let drho = traj.a_vals()[k] * traj.rho00()[k] - traj.b_vals()[k];
            (traj.times()[k], w * drho + integrand[k])
        })
        .collect()
}

/// `T_eff = ω / ln(ρ00/ρ11)`; `+∞` when the populations are equal to 1e-12.
pub fn effective_temperature<T: Real>(rho00: T, rho11: T, omega: T) -> Result<T> {
    if !(rho00 > T::zero() && rho11 > T::zero()) {
        return Err(OttoError::Domain(format!(
            "effective temperature needs positive populations, got {rho00} and {rho11}"
        )));
    }
    if (rho00 - rho11).abs() < T::lit(1e-12) {
        return Ok(T::infinity());
    }
    Ok(omega / (rho00 / rho11).ln())
}

/// All per-node energy series of one stroke.
#[derive(Debug, Clone, PartialEq)]
pub struct StrokeEnergetics<T> {
    pub times: Vec<T>,
    pub rho00: Vec<T>,
    pub system_change: Vec<T>,
    pub reservoir_change: Vec<T>,
    pub interaction: Vec<T>,
    pub flow: Vec<T>,
}

impl<T: Real> StrokeEnergetics<T> {
    pub fn from_trajectory(traj: &Trajectory<T>) -> Self {
        let w = traj.splitting();
        let r0 = traj.initial_rho00();
        let corr = correction_integral(traj);
        let system_change: Vec<T> = traj.rho00().iter().map(|&r| w * (r0 - r)).collect();
        let reservoir_change = system_change
            .iter()
            .zip(&corr)
            .map(|(&s, &c)| -s + c)
            .collect();
        let interaction = corr.iter().map(|&c| -c).collect();
        let flow = energy_flow(traj).into_iter().map(|(_, f)| f).collect();
        Self {
            times: traj.times().to_vec(),
            rho00: traj.rho00().to_vec(),
            system_change,
            reservoir_change,
            interaction,
            flow,
        }
    }

    pub fn final_interaction(&self) -> T {
        *self.interaction.last().expect("non-empty")
    }
}

/// Limit cycle, cycle-state trajectories, and ledger for one engine.
#[derive(Debug, Clone)]
pub struct CycleEvaluation<T> {
    pub limit: LimitCycle<T>,
    pub hot: Trajectory<T>,
    pub cold: Trajectory<T>,
    pub ledger: EnergyLedger<T>,
}

/// Runs both strokes and evaluates the ledger on the limit cycle.
pub fn evaluate_engine<T: Real>(
    engine: &EngineParams<T>,
    dynamics: Dynamics,
    step: Option<T>,
) -> Result<CycleEvaluation<T>> {
    engine.validate()?;
    let hot = Arc::new(stroke_solution(engine, Bath::Hot, dynamics, step)?);
    let cold = Arc::new(stroke_solution(engine, Bath::Cold, dynamics, step)?);
    evaluate_with_solutions(engine, &hot, &cold)
}

/// Same as [`evaluate_engine`] with prebuilt stroke solutions, so sweeps can
/// share one solution per stroke duration.
pub fn evaluate_with_solutions<T: Real>(
    engine: &EngineParams<T>,
    hot: &Arc<StrokeSolution<T>>,
    cold: &Arc<StrokeSolution<T>>,
) -> Result<CycleEvaluation<T>> {
    let hot_map = checked_map(hot)?;
    let cold_map = checked_map(cold)?;
    let limit = limit_cycle(&hot_map, &cold_map)?;

    let hot_traj = hot.trajectory(limit.p_hot)?;
    let cold_traj = cold.trajectory(limit.p_cold)?;
    let hot_e = StrokeEnergetics::from_trajectory(&hot_traj);
    let cold_e = StrokeEnergetics::from_trajectory(&cold_traj);

    let (work_ad1, work_ad2) = work_adiabatic(engine, limit.p_hot, limit.p_cold, hot, cold);
    let work_i = work_net_i(work_ad1, work_ad2);
    let interaction_hot = hot_e.final_interaction();
    let interaction_cold = cold_e.final_interaction();
    let last = |v: &[T]| *v.last().expect("non-empty");

    let ledger = EnergyLedger {
        work_ad1,
        work_ad2,
        work_i,
        work_ii: work_net_ii(work_i, interaction_hot, interaction_cold),
        interaction_hot,
        interaction_cold,
        system_change_hot: last(&hot_e.system_change),
        system_change_cold: last(&cold_e.system_change),
        reservoir_change_hot: last(&hot_e.reservoir_change),
        reservoir_change_cold: last(&cold_e.reservoir_change),
        eta_otto: engine.otto_efficiency(),
        eta_carnot: engine.carnot_efficiency(),
    };
    Ok(CycleEvaluation {
        limit,
        hot: hot_traj,
        cold: cold_traj,
        ledger,
    })
}
