//! Inspect the swarm's internal dynamics while a trial runs.
//!
//! Steps a single simulation and periodically prints the role census
//! (obstacle avoiders / trackers / flockmates / explorers), the pheromone
//! field mass, area coverage, and the number of connected flock groups
//! (drones within flock-vision range of each other).
//!
//! Run: cargo run --example swarm_dynamics [--] [SCENARIO] [ALGO] [REDUNDANCY] [SEED]

use std::collections::HashSet;

use stigflock::{Algorithm, Role, Scenario, ScenarioKind, SimParams, Simulation};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).filter(|a| a != "--").collect();
    let kind = ScenarioKind::parse(args.first().map_or("field", |s| s)).expect("scenario name");
    let algo = Algorithm::parse(args.get(1).map_or("sf", |s| s)).expect("algorithm");
    let redundancy: u32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let seed: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(42);

    let scenario = Scenario::generate(kind, seed);
    let mut params = SimParams::default();
    params.algorithm = algo;
    params.redundancy = redundancy;
    let mut sim = Simulation::new(&scenario, &params, seed);

    println!(
        "{} / {} / redundancy {} / seed {} — {} drones\n",
        scenario.name, algo.label(), redundancy, seed, sim.drones.len()
    );
    println!("{:>6} {:>6} {:>11} {:>17} {:>8} {:>7}", "tick", "found", "field mass", "avoid/trk/flk/exp", "coverage", "groups");
    let mut visited: HashSet<(usize, usize)> = HashSet::new();
    loop {
        sim.step();
        for d in &sim.drones {
            visited.insert((d.position.0 as usize, d.position.1 as usize));
        }
        if sim.tick_count() % 250 == 0 {
            let mut roles = [0usize; 4];
            for d in sim.last_decisions() {
                roles[match d.role {
                    Role::ObstacleAvoider => 0,
                    Role::Tracker => 1,
                    Role::Flockmate => 2,
                    Role::Explorer => 3,
                }] += 1;
            }
            println!(
                "{:>6} {:>6} {:>11.0} {:>17} {:>8} {:>7}",
                sim.tick_count(),
                sim.env.confirmed_count(),
                sim.field.total_mass(),
                format!("{}/{}/{}/{}", roles[0], roles[1], roles[2], roles[3]),
                visited.len(),
                flock_groups(&sim, params.flock_vision)
            );
        }
        if sim.found_fraction() >= params.termination_fraction {
            println!("\ncompleted at tick {} with {} cells covered", sim.tick_count(), visited.len());
            return;
        }
        if sim.tick_count() >= params.tick_cap {
            println!("\ntick cap reached with {} confirmed", sim.env.confirmed_count());
            return;
        }
    }
}

/// Connected components of the "within flock vision" graph (union-find).
fn flock_groups(sim: &Simulation, vision: f64) -> usize {
    let n = sim.drones.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            let dx = sim.drones[i].position.0 - sim.drones[j].position.0;
            let dy = sim.drones[i].position.1 - sim.drones[j].position.1;
            if dx * dx + dy * dy <= vision * vision {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    (0..n).map(|i| find(&mut parent, i)).collect::<HashSet<_>>().len()
}
