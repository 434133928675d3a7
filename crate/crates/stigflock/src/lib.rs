//! Deterministic, seedable simulator of decentralized mini-UAV swarm target
//! search. Drones combine digital-pheromone stigmergy (deposit, diffusion,
//! evaporation on a grid) with Boids flocking, sense targets through an
//! imperfect proximity-localized sensor, and confirm them under a
//! distinct-drone redundancy rule. An experiment harness runs seeded trials
//! to a 95%-of-targets termination criterion and aggregates completion
//! times with Student-t confidence intervals.
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability; the `stigflock` binary exposes the same machinery as
//! `generate`, `run`, `grid`, `sweep`, and `validate` subcommands.

pub mod behavior;
pub mod cli;
pub mod environment;
pub mod experiment;
pub mod field;
pub mod params;
pub mod rng;
pub mod scenario;
pub mod sim;

pub use behavior::{Drone, Role};
pub use environment::{ConfirmOutcome, GridEnvironment, SensorModel, SensorReading};
pub use experiment::{run_experiment, run_grid, run_trial, ExperimentStats, TrialConfig, TrialOutcome, TrialResult};
pub use field::{Cell, FieldParams, PheromoneField};
pub use params::{Algorithm, SensingErrorRule, SimParams};
pub use scenario::{Scenario, ScenarioKind};
pub use sim::Simulation;
