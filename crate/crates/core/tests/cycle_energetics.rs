use std::sync::Arc;

use otto_core::cycle::{stroke_solution, thermalized_map};
use otto_core::markov::stationary_rho00;
use otto_core::quad::cumulative_simpson;
use otto_core::{
    effective_temperature, evaluate_engine, evaluate_with_solutions, iterate_cycle, work_from_maps,
    Bath, Dynamics, EngineParams64, StrokeEnergetics, StrokeMap64,
};
use proptest::prelude::*;

fn reference() -> EngineParams64 {
    EngineParams64::reference_point()
}

#[test]
fn hot_stroke_shows_energy_backflow() {
    let eval = evaluate_engine(&reference(), Dynamics::Tcl2, None).unwrap();
    let flow = StrokeEnergetics::from_trajectory(&eval.hot).flow;
    let negative: Vec<f64> = eval
        .hot
        .times()
        .iter()
        .zip(&flow)
        .filter(|(_, f)| **f < 0.0)
        .map(|(t, _)| *t)
        .collect();
    assert!(!negative.is_empty());
    assert!(negative.iter().all(|&t| t > 1.0 && t < 4.0), "{negative:?}");

    let eval = evaluate_engine(&reference(), Dynamics::Markov, None).unwrap();
    let flow = StrokeEnergetics::from_trajectory(&eval.hot).flow;
    assert!(flow.iter().all(|&f| f >= -1e-12));
}

#[test]
fn effective_temperature_overshoots_reservoir() {
    let eval = evaluate_engine(&reference(), Dynamics::Tcl2, None).unwrap();
    let peak = eval
        .hot
        .rho00()
        .iter()
        .map(|&r| effective_temperature(r, 1.0 - r, 1.0).unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(peak > 5.0, "{peak}");
}

#[test]
fn interaction_energy_is_negative_after_short_hot_strokes() {
    for t1 in [1.0, 2.0, 3.0, 4.0, 5.0] {
        let engine = EngineParams64 { t1, ..reference() };
        let tcl2 = evaluate_engine(&engine, Dynamics::Tcl2, None).unwrap();
        assert!(tcl2.ledger.interaction_hot < 0.0, "t1={t1}");
        let markov = evaluate_engine(&engine, Dynamics::Markov, None).unwrap();
        assert!(markov.ledger.interaction_hot.abs() < 1e-10);
        assert_eq!(markov.ledger.work_i, markov.ledger.work_ii);
    }
}

#[test]
fn energy_is_conserved_on_every_node() {
    for dynamics in [Dynamics::Tcl2, Dynamics::Markov] {
        let eval = evaluate_engine(&reference(), dynamics, None).unwrap();
        for (traj, w) in [(&eval.hot, 1.0), (&eval.cold, 0.18)] {
            let e = StrokeEnergetics::from_trajectory(traj);
            for k in 0..e.times.len() {
                let total = e.system_change[k] + e.reservoir_change[k] + e.interaction[k];
                assert!(total.abs() < 1e-8 * w);
            }
        }
    }
}

#[test]
fn flow_integrates_to_reservoir_energy() {
    let eval = evaluate_engine(&reference(), Dynamics::Tcl2, None).unwrap();
    for traj in [&eval.hot, &eval.cold] {
        let e = StrokeEnergetics::from_trajectory(traj);
        let integrated = cumulative_simpson(&e.flow, traj.solution().step());
        for (x, y) in integrated.iter().zip(&e.reservoir_change) {
            assert!((x - y).abs() < 1e-8, "{x} vs {y}");
        }
    }
}

#[test]
fn limit_cycle_is_reached_by_iteration() {
    let engine = reference();
    let eval = evaluate_engine(&engine, Dynamics::Tcl2, None).unwrap();
    let hot = StrokeMap64::from_solution(eval.hot.solution());
    let cold = StrokeMap64::from_solution(eval.cold.solution());
    let path = iterate_cycle(&hot, &cold, 0.9, eval.limit.n_iter_check + 1).unwrap();
    let (p_hot, p_cold) = *path.last().unwrap();
    assert!((p_hot - eval.limit.p_hot).abs() < 1e-12);
    assert!((p_cold - eval.limit.p_cold).abs() < 1e-12);
    assert!((eval.limit.p_hot - 0.54472).abs() < 1e-4);
    assert!((eval.limit.p_cold - 0.54023).abs() < 1e-4);
}

#[test]
fn reference_point_ledger() {
    let eval = evaluate_engine(&reference(), Dynamics::Tcl2, None).unwrap();
    let l = eval.ledger;
    assert!((l.work_i - (l.work_ad1 - l.work_ad2)).abs() < 1e-15);
    assert!((l.work_ii - (l.work_i + l.interaction_hot + l.interaction_cold)).abs() < 1e-15);
    assert!((l.interaction_hot + 0.00588).abs() < 5e-5);
    assert!((l.system_change_hot - 0.00449).abs() < 5e-5);
    assert!(l.work_ii < 0.0);
}

#[test]
fn full_thermalization_work_matches_gibbs_populations() {
    let engine = reference();
    let hot = thermalized_map(&engine, Bath::Hot);
    let cold = thermalized_map(&engine, Bath::Cold);
    let (w1, w2) = work_from_maps(&engine, &hot, &cold).unwrap();
    let gap = engine.omega_h - engine.omega_c;
    assert!((w1 - gap * (1.0 - stationary_rho00(1.0, 5.0))).abs() < 1e-15);
    assert!((w2 - gap * (1.0 - stationary_rho00(0.18, 1.0))).abs() < 1e-15);
}

#[test]
fn long_markov_strokes_approach_full_thermalization() {
    let engine = EngineParams64 {
        t1: 4000.0,
        t2: 4000.0,
        ..reference()
    };
    let eval = evaluate_engine(&engine, Dynamics::Markov, Some(1.0)).unwrap();
    let hot = thermalized_map(&engine, Bath::Hot);
    let cold = thermalized_map(&engine, Bath::Cold);
    let (w1, w2) = work_from_maps(&engine, &hot, &cold).unwrap();
    assert!((eval.ledger.work_i - (w1 - w2)).abs() < 1e-10);
}

#[test]
fn shared_solutions_give_same_ledger() {
    let engine = reference();
    let hot = Arc::new(stroke_solution(&engine, Bath::Hot, Dynamics::Tcl2, None).unwrap());
    let cold = Arc::new(stroke_solution(&engine, Bath::Cold, Dynamics::Tcl2, None).unwrap());
    let a = evaluate_with_solutions(&engine, &hot, &cold).unwrap();
    let b = evaluate_engine(&engine, Dynamics::Tcl2, None).unwrap();
    assert_eq!(a.ledger, b.ledger);
}

#[test]
fn single_precision_cycle_tracks_double() {
    let engine = otto_core::EngineParams32::reference_point();
    let eval = evaluate_engine(&engine, Dynamics::Tcl2, None).unwrap();
    assert!((eval.limit.p_hot as f64 - 0.54472).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn markov_cycle_cannot_beat_carnot(
        t1 in 0.5f64..80.0,
        t2 in 0.5f64..80.0,
        ratio in 0.05f64..0.199,
    ) {
        let engine = EngineParams64 { omega_c: ratio, t1, t2, ..reference() };
        let eval = evaluate_engine(&engine, Dynamics::Markov, Some(0.05)).unwrap();
        prop_assert!(eval.ledger.work_i <= 0.0);
    }
}
