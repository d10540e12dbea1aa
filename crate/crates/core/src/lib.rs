#![forbid(unsafe_code)]

//! Graph-influence engine built on a linear, circuit-style propagation
//! model: damped influence systems solved by sparse Gauss-Seidel sweeps,
//! independent influence under grounded seed sets, a bound-pruned greedy
//! seed selector, standard baselines, and a Monte-Carlo weighted-cascade
//! simulator for ground-truth spread measurement.

pub mod baselines;
pub mod error;
pub mod graph;
pub mod indep;
pub mod influence;
pub mod maximize;
pub mod report;
pub mod simulate;
pub mod solver;
pub mod synth;
pub mod transmission;

pub use error::{Error, Result};
pub use graph::Graph;
pub use indep::{joint_update, InfluenceState};
pub use influence::{BoundTable, InfluenceModel, InfluenceVector};
pub use maximize::{circuit_maximize, reference_greedy, SelectionTrace};
pub use simulate::{estimate_spread, CascadeModel, SpreadEstimate};
pub use solver::{
    dense_inverse_oracle, gauss_seidel_solve, solve_potentials, Orientation, PropagationSystem,
    SolveReport, SolverConfig,
};
pub use transmission::{build_transmission, DampingVector, TransmissionMatrix, WeightScheme};
