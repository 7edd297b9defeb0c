//! Limit cycle of the repeated Otto protocol.
//!
//! After each stroke the system is projected onto its diagonal and the
//! reservoir is reset, so the pre-stroke ground population evolves under an
//! affine map. Its fixed point does not depend on whether the stroke
//! dynamics is Markovian.

use std::sync::Arc;

use crate::energetics::EngineParams;
use crate::error::{OttoError, Result};
use crate::markov::{markov_solution, stationary_rho00};
use crate::scalar::Real;
use crate::tcl2::{default_step, StrokeSolution};

pub const DEGENERACY_MARGIN: f64 = 1e-12;
const CONVERGENCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bath {
    Hot,
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dynamics {
    Tcl2,
    Markov,
}

impl std::fmt::Display for Dynamics {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Dynamics::Tcl2 => "tcl2",
            Dynamics::Markov => "markov",
        })
    }
}

impl std::str::FromStr for Dynamics {
    type Err = OttoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tcl2" => Ok(Dynamics::Tcl2),
            "markov" => Ok(Dynamics::Markov),
            other => Err(OttoError::InvalidParams(format!(
                "unknown backend '{other}'"
            ))),
        }
    }
}

/// Final ground populations of a stroke started in |0⟩ (`r0`) and |1⟩ (`r1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrokeMap<T> {
    pub r0: T,
    pub r1: T,
}

impl<T: Real> StrokeMap<T> {
    pub fn identity() -> Self {
        Self {
            r0: T::one(),
            r1: T::zero(),
        }
    }

    /// A stroke long enough to erase the initial state.
    pub fn thermalized(rho_inf: T) -> Self {
        Self {
            r0: rho_inf,
            r1: rho_inf,
        }
    }

    pub fn from_solution(sol: &StrokeSolution<T>) -> Self {
        Self {
            r0: sol.final_rho00(T::one()),
            r1: sol.final_rho00(T::zero()),
        }
    }

    /// Ground population after the stroke for pre-stroke population `p`.
    pub fn apply(&self, p: T) -> T {
        p * self.r0 + (T::one() - p) * self.r1
    }

    pub fn slope(&self) -> T {
        self.r0 - self.r1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCycle<T> {
    /// Ground population before the hot stroke, `P^h`.
    pub p_hot: T,
    /// Ground population before the cold stroke, `P^c`.
    pub p_cold: T,
    /// Contraction factor `p0` of the one-cycle map.
    pub contraction: T,
    /// Cycles needed to bring any start within 1e-12 of the fixed point.
    pub n_iter_check: usize,
}

/// Builds the TCL2 or Markov solution for one stroke of `engine`.
pub fn stroke_solution<T: Real>(
    engine: &EngineParams<T>,
    which: Bath,
    dynamics: Dynamics,
    step: Option<T>,
) -> Result<StrokeSolution<T>> {
    let (spec, splitting, duration) = match which {
        Bath::Hot => (engine.hot_reservoir()?, engine.omega_h, engine.t1),
        Bath::Cold => (engine.cold_reservoir()?, engine.omega_c, engine.t2),
    };
    let h = step.unwrap_or_else(|| default_step(duration));
    match dynamics {
        Dynamics::Tcl2 => StrokeSolution::tcl2(&spec, splitting, duration, h),
        Dynamics::Markov => markov_solution(&spec, splitting, duration, h),
    }
}

/// Stroke map for the hot (duration `t1`, splitting `ω_h`) or cold stroke.
/// A zero duration gives the identity map.
pub fn stroke_map<T: Real>(
    engine: &EngineParams<T>,
    which: Bath,
    dynamics: Dynamics,
) -> Result<StrokeMap<T>> {
    let duration = match which {
        Bath::Hot => engine.t1,
        Bath::Cold => engine.t2,
    };
    if duration == T::zero() {
        return Ok(StrokeMap::identity());
    }
    let sol = Arc::new(stroke_solution(engine, which, dynamics, None)?);
    checked_map(&sol)
}

/// Stroke map after verifying both pure-state branches stay physical.
pub fn checked_map<T: Real>(sol: &Arc<StrokeSolution<T>>) -> Result<StrokeMap<T>> {
    let ground = sol.trajectory(T::one())?;
    let excited = sol.trajectory(T::zero())?;
    Ok(StrokeMap {
        r0: ground.final_rho00(),
        r1: excited.final_rho00(),
    })
}

/// Closed-form fixed point `P^μ = p^μ / (1 − p0)`.
pub fn limit_cycle<T: Real>(hot: &StrokeMap<T>, cold: &StrokeMap<T>) -> Result<LimitCycle<T>> {
    let p0 = cold.slope() * hot.slope();
    if !(p0.abs() < T::one() - T::lit(DEGENERACY_MARGIN)) {
        return Err(OttoError::DegenerateCycle { p0: p0.as_f64() });
    }
    let one = T::one();
    let p_hot_num = cold.r0 * hot.r1 + cold.r1 * (one - hot.r1);
    let p_cold_num = hot.r0 * cold.r1 + hot.r1 * (one - cold.r1);
    let denom = one - p0;
    let n_iter_check = if p0 == T::zero() {
        1
    } else {
        let k = (CONVERGENCE_TOL.ln() / p0.abs().as_f64().ln()).ceil();
        k.max(1.0) as usize
    };
    Ok(LimitCycle {
        p_hot: p_hot_num / denom,
        p_cold: p_cold_num / denom,
        contraction: p0,
        n_iter_check,
    })
}

/// Explicit orbit `(P^h_k, P^c_k)` for `k = 1..=n`, starting from `P^h_1 = start`.
pub fn iterate_cycle<T: Real>(
    hot: &StrokeMap<T>,
    cold: &StrokeMap<T>,
    start: T,
    n: usize,
) -> Result<Vec<(T, T)>> {
    if !(start >= T::zero() && start <= T::one()) {
        return Err(OttoError::InvalidParams(format!(
            "start population must lie in [0, 1], got {start}"
        )));
    }
    if n == 0 {
        return Err(OttoError::InvalidParams("need at least one cycle".into()));
    }
    let mut out = Vec::with_capacity(n);
    let mut p_hot = start;
    for _ in 0..n {
        let p_cold = hot.apply(p_hot);
        out.push((p_hot, p_cold));
        p_hot = cold.apply(p_cold);
    }
    Ok(out)
}

/// Markov stroke map in the full-thermalization limit.
pub fn thermalized_map<T: Real>(engine: &EngineParams<T>, which: Bath) -> StrokeMap<T> {
    match which {
        Bath::Hot => StrokeMap::thermalized(stationary_rho00(engine.omega_h, engine.temp_h)),
        Bath::Cold => StrokeMap::thermalized(stationary_rho00(engine.omega_c, engine.temp_c)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_maps_are_degenerate() {
        let id = StrokeMap::<f64>::identity();
        assert!(matches!(
            limit_cycle(&id, &id),
            Err(OttoError::DegenerateCycle { .. })
        ));
        let mut engine = EngineParams::<f64>::reference_point();
        engine.t1 = 0.0;
        engine.t2 = 0.0;
        let hot = stroke_map(&engine, Bath::Hot, Dynamics::Tcl2).unwrap();
        assert_eq!(hot, StrokeMap::identity());
    }

    #[test]
    fn zero_coupling_gives_identity() {
        let mut engine = EngineParams::<f64>::reference_point();
        engine.coupling = 0.0;
        for d in [Dynamics::Tcl2, Dynamics::Markov] {
            let m = stroke_map(&engine, Bath::Hot, d).unwrap();
            assert_eq!(m.r0, 1.0);
            assert_eq!(m.r1, 0.0);
        }
    }

    #[test]
    fn long_markov_stroke_thermalizes() {
        let mut engine = EngineParams::<f64>::reference_point();
        engine.t2 = 2000.0;
        let m = stroke_map(&engine, Bath::Cold, Dynamics::Markov).unwrap();
        let inf = stationary_rho00(0.18f64, 1.0);
        assert!((m.r0 - inf).abs() < 1e-14 && (m.r1 - inf).abs() < 1e-14);
    }

    #[test]
    fn thermalized_strokes_swap_equilibria() {
        let hot = StrokeMap::thermalized(0.55f64);
        let cold = StrokeMap::thermalized(0.6);
        let lc = limit_cycle(&hot, &cold).unwrap();
        assert_eq!(lc.contraction, 0.0);
        assert!((lc.p_hot - 0.6).abs() < 1e-15);
        assert!((lc.p_cold - 0.55).abs() < 1e-15);
    }

    #[test]
    fn fixed_point_is_stationary_under_iteration() {
        let hot = StrokeMap {
            r0: 0.84f64,
            r1: 0.2,
        };
        let cold = StrokeMap { r0: 0.7, r1: 0.45 };
        let lc = limit_cycle(&hot, &cold).unwrap();
        let orbit = iterate_cycle(&hot, &cold, lc.p_hot, 1).unwrap();
        assert!((orbit[0].0 - lc.p_hot).abs() < 1e-15);
        assert!((orbit[0].1 - lc.p_cold).abs() < 1e-15);
    }

    #[test]
    fn orbit_contracts_geometrically() {
        let hot = StrokeMap {
            r0: 0.9f64,
            r1: 0.05,
        };
        let cold = StrokeMap { r0: 0.95, r1: 0.3 };
        let lc = limit_cycle(&hot, &cold).unwrap();
        let q = lc.contraction.abs();
        let lo = iterate_cycle(&hot, &cold, 0.0, 200).unwrap();
        let hi = iterate_cycle(&hot, &cold, 1.0, 200).unwrap();
        for k in 0..200 {
            assert!((lo[k].0 - lc.p_hot).abs() <= q.powi(k as i32) + 1e-15);
            let gap = (hi[k].0 - lo[k].0).abs();
            assert!((gap - q.powi(k as i32)).abs() < 1e-12);
        }
        assert!((lo[199].0 - lc.p_hot).abs() < 1e-10);
        assert!((hi[199].0 - lc.p_hot).abs() < 1e-10);
    }

    #[test]
    fn iterate_rejects_bad_input() {
        let m = StrokeMap {
            r0: 0.9f64,
            r1: 0.1,
        };
        assert!(iterate_cycle(&m, &m, 1.5, 3).is_err());
        assert!(iterate_cycle(&m, &m, 0.5, 0).is_err());
    }

    fn arb_map() -> impl Strategy<Value = StrokeMap<f64>> {
        (0.0f64..=1.0, 0.0f64..=1.0).prop_map(|(r0, r1)| StrokeMap { r0, r1 })
    }

    proptest! {
        #[test]
        fn fixed_point_bounds_and_consistency(hot in arb_map(), cold in arb_map()) {
            match limit_cycle(&hot, &cold) {
                Ok(lc) => {
                    prop_assert!((0.0..=1.0).contains(&lc.p_hot));
                    prop_assert!((0.0..=1.0).contains(&lc.p_cold));
                    // The bound degrades as 1/(1 − |p0|) near degeneracy.
                    let scale = 1.0 / (1.0 - lc.contraction.abs());
                    prop_assert!((hot.apply(lc.p_hot) - lc.p_cold).abs() < 1e-14 * scale);
                    prop_assert!((cold.apply(lc.p_cold) - lc.p_hot).abs() < 1e-14 * scale);
                }
                Err(e) => {
                    let degenerate = matches!(e, OttoError::DegenerateCycle { .. });
                    prop_assert!(degenerate);
                }
            }
        }
    }
}
