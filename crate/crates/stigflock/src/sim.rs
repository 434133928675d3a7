//! The per-trial simulation loop: frozen-snapshot drone decisions, side
//! effects in drone-id order, then a field step.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::behavior::{self, BehaviorParams, Decision, Drone, Role};
use crate::environment::{ConfirmOutcome, GridEnvironment, SensorModel};
use crate::field::{Cell, FieldParams, PheromoneField};
use crate::params::{SensingErrorRule, SimParams};
use crate::rng;
use crate::scenario::Scenario;

/// A running trial. Owns the world state and the per-drone RNG streams; all
/// evolution is deterministic in the trial seed.
pub struct Simulation {
    pub env: GridEnvironment,
    pub field: PheromoneField,
    pub drones: Vec<Drone>,
    behavior: BehaviorParams,
    field_params: FieldParams,
    model: SensorModel,
    stig_intensity: f64,
    drone_rngs: Vec<ChaCha8Rng>,
    tick: u64,
    decisions: Vec<Decision>,
    /// (cell, tick) for each confirmation, in occurrence order.
    confirmation_log: Vec<(Cell, u64)>,
}

impl Simulation {
    pub fn new(scenario: &Scenario, params: &SimParams, trial_seed: u64) -> Simulation {
        let env = GridEnvironment::new(
            scenario.grid_size,
            scenario.grid_size,
            scenario.obstacle_cells(),
            scenario.targets.iter().copied(),
        )
        .expect("scenario validated before simulation");
        let field = PheromoneField::with_obstacles(
            scenario.grid_size,
            scenario.grid_size,
            scenario.obstacle_cells(),
        );
        let mut setup_rng = rng::stream(trial_seed, "setup", 0);
        let drones: Vec<Drone> = scenario
            .spawns
            .iter()
            .enumerate()
            .map(|(i, s)| Drone {
                id: i as u32,
                position: (s.x, s.y),
                heading: s.heading,
                role: Role::Explorer,
                sensing_error: match params.sensing_error {
                    SensingErrorRule::Fixed(xi) => xi,
                    SensingErrorRule::UniformPerDrone { lo, hi } => setup_rng.gen_range(lo..=hi),
                },
            })
            .collect();
        let drone_rngs =
            (0..drones.len()).map(|i| rng::stream(trial_seed, "drone", i as u64)).collect();
        Simulation {
            env,
            field,
            behavior: BehaviorParams::from_sim(params),
            field_params: FieldParams::from_sim(params),
            model: SensorModel::new(0.0, params.redundancy),
            stig_intensity: params.stig_intensity,
            drones,
            drone_rngs,
            tick: 0,
            decisions: Vec::new(),
            confirmation_log: Vec::new(),
        }
    }

    pub fn tick_count(&self) -> u64 {
        self.tick
    }

    pub fn found_fraction(&self) -> f64 {
        self.env.found_fraction()
    }

    pub fn confirmation_log(&self) -> &[(Cell, u64)] {
        &self.confirmation_log
    }

    /// Decisions taken on the most recent tick (diagnostic/trace).
    pub fn last_decisions(&self) -> &[Decision] {
        &self.decisions
    }

    /// Advance one tick: every drone decides against the frozen snapshot,
    /// side effects apply in drone-id order, then the field diffuses and
    /// evaporates.
    pub fn step(&mut self) {
        self.decisions.clear();
        for (i, drone) in self.drones.iter().enumerate() {
            self.decisions.push(behavior::decide(
                drone,
                &self.env,
                &self.field,
                &self.drones,
                &self.behavior,
                &mut self.drone_rngs[i],
            ));
        }
        let tick = self.tick + 1;
        for d in &self.decisions {
            let drone = &mut self.drones[d.drone as usize];
            drone.heading = d.new_heading;
            drone.position = d.new_position;
            drone.role = d.role;
            if let Some(cell) = d.deposit {
                self.field
                    .deposit(cell, self.stig_intensity)
                    .expect("drones only occupy open in-bounds cells");
            }
            if let Some(cell) = d.report {
                if self.env.record_detection(&self.model, d.drone, cell)
                    == ConfirmOutcome::NewlyConfirmed
                {
                    self.confirmation_log.push((cell, tick));
                }
            }
        }
        if self.field.total_mass() > 0.0 {
            self.field.step(&self.field_params);
        }
        self.tick = tick;
    }
}
