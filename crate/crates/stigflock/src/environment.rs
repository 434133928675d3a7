//! Static world state (obstacles, targets) and the dynamic detection state:
//! imperfect proximity-localized sensing, distinct-drone confirmation
//! counting, and the found-fraction termination signal.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use thiserror::Error;

use crate::field::Cell;

pub type DroneId = u32;

/// Imperfect sensor: readings flip with probability ξ, but only on a target
/// cell or one of its 8-adjacent cells; everywhere else the sensor is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorModel {
    /// ξ, in [0,1].
    pub error_probability: f64,
    /// Distinct-drone confirmations required to declare a target found.
    pub redundancy: u32,
}

impl SensorModel {
    pub fn new(error_probability: f64, redundancy: u32) -> Self {
        assert!((0.0..=1.0).contains(&error_probability), "error probability must be in [0,1]");
        assert!(redundancy >= 1, "redundancy must be at least 1");
        SensorModel { error_probability, redundancy }
    }
}

/// One sensing act at a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SensorReading {
    pub cell: Cell,
    pub positive: bool,
}

/// What a positive report did to the confirmation state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfirmOutcome {
    /// Not a true target, or already confirmed: nothing recorded.
    Ignored,
    /// Drone added to (or already in) the cell's confirming set.
    Counted,
    /// This report pushed the distinct-drone count to the redundancy
    /// threshold; the cell is now confirmed.
    NewlyConfirmed,
}

#[derive(Debug, Error, PartialEq)]
pub enum EnvError {
    #[error("cell ({0}, {1}) is out of bounds")]
    OutOfBounds(usize, usize),
    #[error("target set is empty")]
    NoTargets,
    #[error("cell ({0}, {1}) is both a target and an obstacle")]
    TargetObstacleOverlap(usize, usize),
}

/// The search world: obstacle and target occupancy plus per-target
/// confirmation records.
#[derive(Debug, Clone)]
pub struct GridEnvironment {
    width: usize,
    height: usize,
    obstacles: Vec<bool>,
    targets: HashSet<Cell>,
    /// Cells that are a target or 8-adjacent to one: the error halo.
    near_target: Vec<bool>,
    confirmations: HashMap<Cell, BTreeSet<DroneId>>,
    confirmed: HashSet<Cell>,
}

impl GridEnvironment {
    pub fn new(
        width: usize,
        height: usize,
        obstacles: impl IntoIterator<Item = Cell>,
        targets: impl IntoIterator<Item = Cell>,
    ) -> Result<Self, EnvError> {
        let mut obstacle_mask = vec![false; width * height];
        for (x, y) in obstacles {
            if x >= width || y >= height {
                return Err(EnvError::OutOfBounds(x, y));
            }
            obstacle_mask[y * width + x] = true;
        }
        let targets: HashSet<Cell> = targets.into_iter().collect();
        if targets.is_empty() {
            return Err(EnvError::NoTargets);
        }
        let mut near_target = vec![false; width * height];
        for &(x, y) in &targets {
            if x >= width || y >= height {
                return Err(EnvError::OutOfBounds(x, y));
            }
            if obstacle_mask[y * width + x] {
                return Err(EnvError::TargetObstacleOverlap(x, y));
            }
            for ny in y.saturating_sub(1)..=(y + 1).min(height - 1) {
                for nx in x.saturating_sub(1)..=(x + 1).min(width - 1) {
                    near_target[ny * width + nx] = true;
                }
            }
        }
        Ok(GridEnvironment {
            width,
            height,
            obstacles: obstacle_mask,
            targets,
            near_target,
            confirmations: HashMap::new(),
            confirmed: HashSet::new(),
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, (x, y): Cell) -> bool {
        x < self.width && y < self.height
    }

    pub fn is_obstacle(&self, cell: Cell) -> bool {
        self.in_bounds(cell) && self.obstacles[cell.1 * self.width + cell.0]
    }

    pub fn is_target(&self, cell: Cell) -> bool {
        self.targets.contains(&cell)
    }

    pub fn target_count(&self) -> usize {
        self.targets.len()
    }

    pub fn confirmed_count(&self) -> usize {
        self.confirmed.len()
    }

    pub fn is_confirmed(&self, cell: Cell) -> bool {
        self.confirmed.contains(&cell)
    }

    pub fn obstacle_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let w = self.width;
        self.obstacles
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// Sense `cell`. On the error halo (a target cell or one 8-adjacent to a
    /// target) the true reading flips with probability ξ, consuming one draw
    /// from `rng`; elsewhere the reading is exact and no draw is consumed.
    pub fn sense<R: Rng>(&self, model: &SensorModel, cell: Cell, rng: &mut R) -> SensorReading {
        assert!(self.in_bounds(cell), "sense: cell out of bounds");
        let truth = self.targets.contains(&cell);
        let positive = if self.near_target[cell.1 * self.width + cell.0] {
            if rng.gen::<f64>() < model.error_probability {
                !truth
            } else {
                truth
            }
        } else {
            truth
        };
        SensorReading { cell, positive }
    }

    /// Record a positive report from `drone_id` at `cell`. Positives on
    /// non-target cells never accrue confirmations; per-drone reports are
    /// idempotent; the transition to confirmed happens exactly once, when the
    /// distinct-drone count reaches the redundancy threshold.
    pub fn record_detection(
        &mut self,
        model: &SensorModel,
        drone_id: DroneId,
        cell: Cell,
    ) -> ConfirmOutcome {
        if !self.targets.contains(&cell) || self.confirmed.contains(&cell) {
            return ConfirmOutcome::Ignored;
        }
        let set = self.confirmations.entry(cell).or_default();
        set.insert(drone_id);
        if set.len() >= model.redundancy as usize {
            self.confirmed.insert(cell);
            ConfirmOutcome::NewlyConfirmed
        } else {
            ConfirmOutcome::Counted
        }
    }

    /// Distinct drones that have reported this cell so far.
    pub fn confirmation_count(&self, cell: Cell) -> usize {
        self.confirmations.get(&cell).map_or(0, BTreeSet::len)
    }

    /// Fraction of targets confirmed so far.
    pub fn found_fraction(&self) -> f64 {
        self.confirmed.len() as f64 / self.targets.len() as f64
    }

    /// Whether a positive sensing at this cell may still release pheromone.
    ///
    /// A confirmed target's sensing cannot activate additional pheromone,
    /// and that covers its whole sensing footprint: positives on a halo cell
    /// are induced by the adjacent target, so they go silent with it. A halo
    /// cell stays active as long as any target covering it is unconfirmed,
    /// and cells outside every footprint are always active.
    pub fn pheromone_active(&self, cell: Cell) -> bool {
        assert!(self.in_bounds(cell), "pheromone_active: cell out of bounds");
        if self.confirmed.contains(&cell) {
            return false;
        }
        if !self.near_target[cell.1 * self.width + cell.0] {
            return true;
        }
        // in at least one target's footprint: active iff one of them is
        // still unconfirmed
        let (x, y) = cell;
        for ny in y.saturating_sub(1)..=(y + 1).min(self.height - 1) {
            for nx in x.saturating_sub(1)..=(x + 1).min(self.width - 1) {
                if self.targets.contains(&(nx, ny)) && !self.confirmed.contains(&(nx, ny)) {
                    return true;
                }
            }
        }
        false
    }
}
