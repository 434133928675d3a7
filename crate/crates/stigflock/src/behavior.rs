//! Per-drone decision logic: target sensing with pheromone release, then the
//! prioritized role cascade (obstacle avoider → tracker → flockmate →
//! explorer) and forward motion with collision clamping.
//!
//! Decisions are pure functions of the frozen previous-tick world snapshot
//! plus the drone's private RNG stream; side effects (deposits, detection
//! reports) are returned in the [`Decision`] and applied by the simulation
//! loop afterwards, in drone-id order.

use rand::Rng;

use crate::environment::{DroneId, GridEnvironment, SensorModel};
use crate::field::{Cell, PheromoneField};
use crate::params::{Algorithm, SimParams};

/// The role a drone assumed on a tick; exactly one per tick.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    ObstacleAvoider,
    Tracker,
    Flockmate,
    Explorer,
}

impl Role {
    pub fn label(self) -> &'static str {
        match self {
            Role::ObstacleAvoider => "obstacle_avoider",
            Role::Tracker => "tracker",
            Role::Flockmate => "flockmate",
            Role::Explorer => "explorer",
        }
    }
}

/// One simulated drone.
#[derive(Debug, Clone)]
pub struct Drone {
    pub id: DroneId,
    /// Continuous position in meters; always in bounds and outside obstacles.
    pub position: (f64, f64),
    /// Heading in degrees, normalized to [0, 360).
    pub heading: f64,
    /// Role assumed on the last tick (diagnostic).
    pub role: Role,
    /// This drone's sensing error probability ξ, fixed for the trial.
    pub sensing_error: f64,
}

/// Motion and perception knobs, extracted from [`SimParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BehaviorParams {
    pub drone_vel: f64,
    pub wiggle_var: f64,
    pub obstacle_vision: f64,
    pub flock_vision: f64,
    pub minimum_separation: f64,
    pub max_separate_turn: f64,
    pub max_align_turn: f64,
    pub max_cohere_turn: f64,
    pub olfaction: f64,
    pub peak_threshold: f64,
    pub algorithm: Algorithm,
}

impl BehaviorParams {
    pub fn from_sim(p: &SimParams) -> Self {
        BehaviorParams {
            drone_vel: p.drone_vel,
            wiggle_var: p.wiggle_var,
            obstacle_vision: p.obstacle_vision,
            flock_vision: p.flock_vision,
            minimum_separation: p.minimum_separation,
            max_separate_turn: p.max_separate_turn,
            max_align_turn: p.max_align_turn,
            max_cohere_turn: p.max_cohere_turn,
            olfaction: p.olfaction,
            peak_threshold: p.peak_threshold,
            algorithm: p.algorithm,
        }
    }
}

/// Outcome of one drone's decision phase, applied after all drones decide.
#[derive(Debug, Clone, Copy)]
pub struct Decision {
    pub drone: DroneId,
    pub role: Role,
    pub new_heading: f64,
    pub new_position: (f64, f64),
    /// Cell to deposit pheromone on (positive reading on an active cell,
    /// stigmergic variants only).
    pub deposit: Option<Cell>,
    /// Cell of a positive reading to report for confirmation bookkeeping.
    pub report: Option<Cell>,
}

/// Normalize an angle in degrees to [0, 360).
pub fn normalize_heading(deg: f64) -> f64 {
    let h = deg.rem_euclid(360.0);
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

/// Signed angular difference `target − current`, in (−180, 180]. An exact
/// opposite comes out as +180 (turn left).
pub fn signed_angle_diff(current: f64, target: f64) -> f64 {
    let d = (target - current).rem_euclid(360.0);
    if d > 180.0 {
        d - 360.0
    } else {
        d
    }
}

/// Turn from `current` toward `target`, changing heading by at most
/// `max_turn` degrees.
pub fn turn_toward(current: f64, target: f64, max_turn: f64) -> f64 {
    let diff = signed_angle_diff(current, target).clamp(-max_turn, max_turn);
    normalize_heading(current + diff)
}

/// Compass bearing (degrees, 0 = +x, counterclockwise) from `a` to `b`;
/// `None` when the points coincide.
pub fn bearing(a: (f64, f64), b: (f64, f64)) -> Option<f64> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    if dx == 0.0 && dy == 0.0 {
        None
    } else {
        Some(normalize_heading(dy.atan2(dx).to_degrees()))
    }
}

fn cell_of(pos: (f64, f64)) -> Cell {
    (pos.0.floor().max(0.0) as usize, pos.1.floor().max(0.0) as usize)
}

/// True when every sample along the forward ray of length `dist` is in
/// bounds and obstacle-free.
pub fn ray_clear(env: &GridEnvironment, from: (f64, f64), heading: f64, dist: f64) -> bool {
    let rad = heading.to_radians();
    let (dx, dy) = (rad.cos(), rad.sin());
    let step = 0.1;
    let mut t = step;
    while t <= dist + 1e-9 {
        let p = (from.0 + t * dx, from.1 + t * dy);
        if p.0 < 0.0
            || p.1 < 0.0
            || p.0 >= env.width() as f64
            || p.1 >= env.height() as f64
            || env.is_obstacle(cell_of(p))
        {
            return false;
        }
        t += step;
    }
    true
}

/// Pick the free direction nearest the current heading, scanning candidates
/// at 10° increments alternating left/right; if every candidate is blocked,
/// reverse.
pub fn avoid_obstacle(env: &GridEnvironment, position: (f64, f64), heading: f64, vision: f64) -> f64 {
    for i in 1..=18u32 {
        let delta = f64::from(i) * 10.0;
        for cand in [heading + delta, heading - delta] {
            if ray_clear(env, position, cand, vision) {
                return normalize_heading(cand);
            }
        }
    }
    normalize_heading(heading + 180.0)
}

/// Point toward the pheromone peak within the olfaction radius, or decline
/// when none exceeds the threshold. Standing on the peak cell keeps the
/// heading, so a drone overflies the summit instead of circling its center.
pub fn track(
    field: &PheromoneField,
    position: (f64, f64),
    heading: f64,
    olfaction: f64,
    threshold: f64,
) -> Option<f64> {
    let peak = field.peak_within(position, olfaction, threshold)?;
    if cell_of(position) == peak {
        return Some(heading);
    }
    let center = (peak.0 as f64 + 0.5, peak.1 as f64 + 0.5);
    Some(bearing(position, center).unwrap_or(heading))
}

/// Boids step relative to flockmates within `flock_vision`, or decline when
/// alone. Separation overrides alignment+cohesion when the nearest mate is
/// closer than `minimum_separation`; each sub-behavior's turn is clamped by
/// its own maximum.
pub fn flock(drone: &Drone, all_drones: &[Drone], params: &BehaviorParams) -> Option<f64> {
    let mut mates: Vec<&Drone> = Vec::new();
    let mut nearest: Option<(&Drone, f64)> = None;
    for other in all_drones {
        if other.id == drone.id {
            continue;
        }
        let d2 = (other.position.0 - drone.position.0).powi(2)
            + (other.position.1 - drone.position.1).powi(2);
        if d2 <= params.flock_vision * params.flock_vision {
            mates.push(other);
            if nearest.map_or(true, |(_, nd2)| d2 < nd2) {
                nearest = Some((other, d2));
            }
        }
    }
    if mates.is_empty() {
        return None;
    }

    let (nearest_mate, nearest_d2) = nearest.unwrap();
    if nearest_d2.sqrt() < params.minimum_separation {
        // separate: turn away from the nearest mate only
        let away = match bearing(drone.position, nearest_mate.position) {
            Some(b) => normalize_heading(b + 180.0),
            None => normalize_heading(drone.heading + 180.0),
        };
        return Some(turn_toward(drone.heading, away, params.max_separate_turn));
    }

    // align toward the mates' mean heading, then cohere toward their barycenter
    let (sx, sy) = mates.iter().fold((0.0, 0.0), |(sx, sy), m| {
        let r = m.heading.to_radians();
        (sx + r.cos(), sy + r.sin())
    });
    let mut heading = drone.heading;
    if sx.hypot(sy) > 1e-12 {
        let mean = normalize_heading(sy.atan2(sx).to_degrees());
        heading = turn_toward(heading, mean, params.max_align_turn);
    }
    let n = mates.len() as f64;
    let barycenter = (
        mates.iter().map(|m| m.position.0).sum::<f64>() / n,
        mates.iter().map(|m| m.position.1).sum::<f64>() / n,
    );
    if let Some(b) = bearing(drone.position, barycenter) {
        heading = turn_toward(heading, b, params.max_cohere_turn);
    }
    Some(heading)
}

/// Random turn drawn uniformly from [−wiggle_var/2, +wiggle_var/2).
pub fn wiggle<R: Rng>(heading: f64, wiggle_var: f64, rng: &mut R) -> f64 {
    let turn = (rng.gen::<f64>() - 0.5) * wiggle_var;
    normalize_heading(heading + turn)
}

fn position_open(env: &GridEnvironment, p: (f64, f64)) -> bool {
    p.0 >= 0.0
        && p.1 >= 0.0
        && p.0 < env.width() as f64
        && p.1 < env.height() as f64
        && !env.is_obstacle(cell_of(p))
}

/// Move forward `vel` along `heading`; on collision with an obstacle cell or
/// the boundary, stay in place.
fn advance(env: &GridEnvironment, position: (f64, f64), heading: f64, vel: f64) -> (f64, f64) {
    let rad = heading.to_radians();
    let (dx, dy) = (vel * rad.cos(), vel * rad.sin());
    let mid = (position.0 + dx / 2.0, position.1 + dy / 2.0);
    let end = (position.0 + dx, position.1 + dy);
    if position_open(env, mid) && position_open(env, end) {
        end
    } else {
        position
    }
}

/// One drone's full tick decision against the frozen t−1 snapshot.
pub fn decide<R: Rng>(
    drone: &Drone,
    env: &GridEnvironment,
    field: &PheromoneField,
    all_drones: &[Drone],
    params: &BehaviorParams,
    rng: &mut R,
) -> Decision {
    let cell = cell_of(drone.position);
    let model = SensorModel::new(drone.sensing_error, 1); // redundancy handled by the environment caller
    let reading = env.sense(&model, cell, rng);
    let mut deposit = None;
    let mut report = None;
    if reading.positive {
        report = Some(cell);
        if params.algorithm != Algorithm::RandomFly && env.pheromone_active(cell) {
            deposit = Some(cell);
        }
    }

    let tracked = if params.algorithm == Algorithm::RandomFly {
        None
    } else {
        track(field, drone.position, drone.heading, params.olfaction, params.peak_threshold)
    };
    let flocked = if params.algorithm == Algorithm::StigmergyFlocking && tracked.is_none() {
        flock(drone, all_drones, params)
    } else {
        None
    };
    // A depositing drone hovers over its detection: the sustained release
    // keeps the plume standing until enough distinct drones have stacked on
    // the cell to confirm it, after which the cell goes silent and releases
    // everyone. Non-target cells release after one tick (the next reading
    // comes back negative), so hovering cannot wedge a drone permanently.
    if deposit.is_some() {
        return Decision {
            drone: drone.id,
            role: Role::Tracker,
            new_heading: drone.heading,
            new_position: drone.position,
            deposit,
            report,
        };
    }

    let (role, heading) = if !ray_clear(env, drone.position, drone.heading, params.obstacle_vision)
    {
        (
            Role::ObstacleAvoider,
            avoid_obstacle(env, drone.position, drone.heading, params.obstacle_vision),
        )
    } else if let Some(h) = tracked {
        (Role::Tracker, h)
    } else if let Some(h) = flocked {
        (Role::Flockmate, h)
    } else {
        (Role::Explorer, wiggle(drone.heading, params.wiggle_var, rng))
    };

    let new_position = advance(env, drone.position, heading, params.drone_vel);
    Decision { drone: drone.id, role, new_heading: heading, new_position, deposit, report }
}
