//! Behavioral model and benchmark harness for an in-memory SAT accelerator.
//!
//! The accelerator maps a CNF formula onto two crossbar arrays: a ternary
//! content-addressable clause matrix whose match lines count satisfied
//! literals per clause, and a gradient matrix that accumulates per-variable
//! make/break counts from the thresholded match lines. Stochastic local
//! search heuristics (GSAT and WalkSAT variants, plus noise-perturbed
//! gradient ascent) run directly on that model, one variable flip per
//! iteration, selected by a winner-take-all over the gradient lines.
//!
//! Alongside the functional model, [`energy`] prices each iteration from
//! circuit-level constants and the measured line activity, and [`metrics`] /
//! [`bench`] turn raw try outcomes into iterations-, time- and
//! energy-to-solution figures with deterministic CSV/JSON reporting.

pub mod accel;
pub mod bench;
pub mod cnf;
pub mod energy;
pub mod hyperopt;
pub mod metrics;
pub mod rng;
pub mod solvers;

pub use accel::{compile, AcceleratorImage, GradientVectors, TernaryCell, Thresholds};
pub use cnf::{parse_dimacs, write_dimacs, Assignment, Clause, CnfError, CnfFormula, Literal};
pub use energy::{iteration_energy, ActivityStats, EnergyBreakdown, EnergyParams};
pub use metrics::{its, optimal_its, ItsCurve};
pub use rng::RngState;
pub use solvers::{run_instance, run_try, Heuristic, RunRecord, SolverConfig};
