//! Simulation parameters: the 14 structural and behavioral knobs, the
//! algorithm variant, and run controls (tick cap, termination fraction).
//!
//! Parameters can be set by their canonical names (case-insensitive) so that
//! command-line overrides read like `--set StigDiffusion=0.85`. Each named
//! parameter has a validity range enforced before any simulation starts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which coordination strategy the drones use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Pure random exploration; sensing still confirms targets but no
    /// pheromone is deposited, tracked, or flocked.
    RandomFly,
    /// Pheromone deposit and tracking, no flocking.
    Stigmergy,
    /// Pheromone plus Boids flocking.
    StigmergyFlocking,
}

impl Algorithm {
    /// Short label used in result tables: R, S, S+F.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::RandomFly => "R",
            Algorithm::Stigmergy => "S",
            Algorithm::StigmergyFlocking => "S+F",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "r" | "random" | "randomfly" => Some(Algorithm::RandomFly),
            "s" | "stig" | "stigmergy" => Some(Algorithm::Stigmergy),
            "sf" | "s+f" | "stigmergyflocking" => Some(Algorithm::StigmergyFlocking),
            _ => None,
        }
    }
}

/// How each drone's sensing error probability ξ is assigned for a trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SensingErrorRule {
    /// Every drone uses the same fixed ξ.
    Fixed(f64),
    /// Each drone draws ξ once per trial, uniformly from `[lo, hi]`.
    UniformPerDrone { lo: f64, hi: f64 },
}

/// All tunables for one simulation run.
///
/// Units: one cell is 1 m on a side and one tick is 1 s, so a speed of
/// 1 m/s is one cell per tick and all completion times are in ticks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// DroneVel: forward speed (m per tick).
    pub drone_vel: f64,
    /// WiggleVar: total spread of the explorer's random turn (degrees).
    pub wiggle_var: f64,
    /// ObstacleVision: obstacle sensing distance (m).
    pub obstacle_vision: f64,
    /// FlockVision: flockmate visibility radius (m).
    pub flock_vision: f64,
    /// MinimumSeparation: distance below which separation kicks in (m).
    pub minimum_separation: f64,
    /// MaxSeparateTurn: separation turn clamp (degrees).
    pub max_separate_turn: f64,
    /// MaxAlignTurn: alignment turn clamp (degrees).
    pub max_align_turn: f64,
    /// MaxCohereTurn: cohesion turn clamp (degrees).
    pub max_cohere_turn: f64,
    /// Olfaction: pheromone sensing radius (m).
    pub olfaction: f64,
    /// StigIntensity: pheromone released per positive sensing.
    pub stig_intensity: f64,
    /// StigDiffusion: fraction of a cell's pheromone shed to its 8 neighbors
    /// per tick.
    pub stig_diffusion: f64,
    /// StigEvaporation: fraction of pheromone LOST per tick (the field keeps
    /// `1 - stig_evaporation`).
    pub stig_evaporation: f64,
    /// SensingError: rule assigning ξ per drone.
    pub sensing_error: SensingErrorRule,
    /// Redundancy: distinct-drone confirmations required per target.
    pub redundancy: u32,
    /// Coordination strategy under test.
    pub algorithm: Algorithm,
    /// Hard cap on simulated ticks; reaching it marks the trial TIMEOUT.
    pub tick_cap: u64,
    /// Fraction of targets that must be confirmed to terminate.
    pub termination_fraction: f64,
    /// Pheromone intensity below which trackers ignore residue.
    pub peak_threshold: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            drone_vel: 1.0,
            wiggle_var: 150.0,
            obstacle_vision: 2.0,
            flock_vision: 7.0,
            minimum_separation: 3.0,
            max_separate_turn: 30.0,
            max_align_turn: 20.0,
            max_cohere_turn: 5.0,
            olfaction: 1.0,
            stig_intensity: 40_000.0,
            stig_diffusion: 0.85,
            stig_evaporation: 0.05,
            sensing_error: SensingErrorRule::UniformPerDrone { lo: 0.001, hi: 0.01 },
            redundancy: 1,
            algorithm: Algorithm::StigmergyFlocking,
            tick_cap: 50_000,
            termination_fraction: 0.95,
            peak_threshold: 1.0,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("unknown parameter `{0}`")]
    UnknownName(String),
    #[error("value `{value}` for {name} is not a number")]
    NotANumber { name: String, value: String },
    #[error("{name}={value} outside valid range {range}")]
    OutOfRange { name: String, value: f64, range: &'static str },
}

/// Canonical override names, matching the published parameter table.
pub const PARAM_NAMES: [&str; 14] = [
    "DroneVel",
    "WiggleVar",
    "ObstacleVision",
    "FlockVision",
    "MinimumSeparation",
    "MaxSeparateTurn",
    "MaxAlignTurn",
    "MaxCohereTurn",
    "Olfaction",
    "StigIntensity",
    "StigDiffusion",
    "StigEvaporation",
    "SensingError",
    "Redundancy",
];

impl SimParams {
    /// Set one parameter by its canonical name (case-insensitive), enforcing
    /// its valid range. `SensingError` is given in percent and installs a
    /// fixed per-drone ξ.
    pub fn set_by_name(&mut self, name: &str, raw: &str) -> Result<(), ParamError> {
        let value: f64 = raw.trim().parse().map_err(|_| ParamError::NotANumber {
            name: name.to_string(),
            value: raw.to_string(),
        })?;
        let oob = |range| ParamError::OutOfRange { name: name.to_string(), value, range };
        let check = |ok: bool, range| if ok { Ok(()) } else { Err(oob(range)) };
        match name.to_ascii_lowercase().as_str() {
            "dronevel" => {
                check(value > 0.0 && value < 15.0, "(0,15)")?;
                self.drone_vel = value;
            }
            "wigglevar" => {
                check(value > 0.0 && value < 180.0, "(0,180)")?;
                self.wiggle_var = value;
            }
            "obstaclevision" => {
                check(value > 0.0 && value < 5.0, "(0,5)")?;
                self.obstacle_vision = value;
            }
            "flockvision" => {
                check((0.0..=50.0).contains(&value), "[0,50]")?;
                self.flock_vision = value;
            }
            "minimumseparation" => {
                check((0.0..=5.0).contains(&value), "[0,5]")?;
                self.minimum_separation = value;
            }
            "maxseparateturn" => {
                check(value > 0.0 && value < 180.0, "(0,180)")?;
                self.max_separate_turn = value;
            }
            "maxalignturn" => {
                check(value > 0.0 && value < 180.0, "(0,180)")?;
                self.max_align_turn = value;
            }
            "maxcohereturn" => {
                check(value > 0.0 && value < 180.0, "(0,180)")?;
                self.max_cohere_turn = value;
            }
            "olfaction" => {
                check(value > 0.0, "(0,inf)")?;
                self.olfaction = value;
            }
            "stigintensity" => {
                check(value > 0.0, "(0,inf)")?;
                self.stig_intensity = value;
            }
            "stigdiffusion" => {
                check((0.0..=1.0).contains(&value), "[0,1]")?;
                self.stig_diffusion = value;
            }
            "stigevaporation" => {
                check((0.0..=1.0).contains(&value), "[0,1]")?;
                self.stig_evaporation = value;
            }
            "sensingerror" => {
                check(value > 0.0 && value < 100.0, "(0,100) percent")?;
                self.sensing_error = SensingErrorRule::Fixed(value / 100.0);
            }
            "redundancy" => {
                check(value >= 1.0 && value.fract() == 0.0, "integer >= 1")?;
                self.redundancy = value as u32;
            }
            // Run controls, settable for convenience but not part of the
            // published tunable set (not in PARAM_NAMES, not sweepable axes
            // of the study).
            "tickcap" => {
                check(value >= 1.0 && value.fract() == 0.0, "integer >= 1")?;
                self.tick_cap = value as u64;
            }
            "terminationfraction" => {
                check(value > 0.0 && value <= 1.0, "(0,1]")?;
                self.termination_fraction = value;
            }
            _ => return Err(ParamError::UnknownName(name.to_string())),
        }
        Ok(())
    }
}
