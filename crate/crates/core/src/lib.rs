//! Quantum Otto engine with a two-level working substance and Ohmic bosonic
//! reservoirs.
//!
//! The isochoric strokes are evolved with the second-order time-convolutionless
//! master equation (or its Markovian limit); the stroboscopic limit cycle,
//! the two net-work definitions, and the reservoir and interaction energies
//! follow from the ground-state population alone. An exact few-mode model is
//! provided as an independent reference.
//!
//! The physics is generic over the scalar through [`Real`]; the `*64`
//! aliases below fix it to `f64`, which is what the accuracy targets assume.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cycle;
pub mod energetics;
pub mod error;
pub mod kernels;
pub mod markov;
pub mod oracle;
pub mod quad;
pub mod scalar;
pub mod state;
pub mod tcl2;

pub use cycle::{iterate_cycle, limit_cycle, stroke_map, Bath, Dynamics, LimitCycle, StrokeMap};
pub use energetics::{
    effective_temperature, energy_flow, evaluate_engine, evaluate_with_solutions,
    interaction_energy, reservoir_energy_change, system_energy_change, work_adiabatic,
    work_from_maps, work_net_i, work_net_ii, CycleEvaluation, EnergyLedger, EngineParams,
    StrokeEnergetics,
};
pub use error::{OttoError, Result};
pub use kernels::{d1, d2, ohmic_j, trigamma, ReservoirSpec};
pub use markov::{bose_n, markov_rho00, positive_work_condition, MarkovStroke};
pub use oracle::{discretize_bath, exact_evolve, DiscretizedBath, ExactEvolution, ExactRun};
pub use scalar::Real;
pub use state::DiagonalState;
pub use tcl2::{coeff_a, coeff_b, evolve_diagonal, StrokeInput, StrokeSolution, Trajectory};

pub type ReservoirSpec64 = ReservoirSpec<f64>;
pub type EngineParams64 = EngineParams<f64>;
pub type StrokeInput64 = StrokeInput<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type StrokeSolution64 = StrokeSolution<f64>;
pub type StrokeMap64 = StrokeMap<f64>;
pub type LimitCycle64 = LimitCycle<f64>;
pub type EnergyLedger64 = EnergyLedger<f64>;
pub type DiagonalState64 = DiagonalState<f64>;
pub type MarkovStroke64 = MarkovStroke<f64>;

pub type ReservoirSpec32 = ReservoirSpec<f32>;
pub type EngineParams32 = EngineParams<f32>;
