//! Reproduce the comparative study: three algorithms, three redundancy
//! levels, two scenarios, ten seeded trials per cell.
//!
//! Prints mean completion time ± 95% confidence half-width for Random Fly
//! (R), Stigmergy (S), and Stigmergy + Flocking (S+F). The expected
//! pattern: S+F < S < R everywhere, and R's disadvantage grows with the
//! redundancy requirement.
//!
//! Run: cargo run --release --example reproduce_results [--] [TRIALS] [SEED]
//! (ten trials per cell takes a few minutes; use a small TRIALS value for
//! a quick look)

use stigflock::{run_grid, Algorithm, Scenario, ScenarioKind, SimParams};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).filter(|a| a != "--").collect();
    let trials: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(10);
    let seed: u64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(14);

    let scenarios = vec![
        Scenario::generate(ScenarioKind::Field, seed),
        Scenario::generate(ScenarioKind::Dumps, seed),
    ];
    let algorithms = [Algorithm::RandomFly, Algorithm::Stigmergy, Algorithm::StigmergyFlocking];
    let redundancies = [1u32, 3, 5];
    println!("{trials} trials per cell, master seed {seed} (this may take a few minutes)\n");
    let rows = run_grid(&scenarios, &algorithms, &redundancies, &SimParams::default(), seed, trials);

    println!("{:<10} {:>10} {:>18} {:>18} {:>18}", "scenario", "redundancy", "R", "S", "S+F");
    for scenario in &scenarios {
        for &redundancy in &redundancies {
            let fmt = |algorithm: Algorithm| {
                let row = rows
                    .iter()
                    .find(|r| r.scenario == scenario.name && r.algorithm == algorithm && r.redundancy == redundancy)
                    .unwrap();
                if row.stats.valid() {
                    format!("{:.0} ± {:.0}", row.stats.mean, row.stats.ci95_halfwidth)
                } else {
                    format!("{} timeouts", row.stats.timeouts)
                }
            };
            println!(
                "{:<10} {:>10} {:>18} {:>18} {:>18}",
                scenario.name,
                redundancy,
                fmt(Algorithm::RandomFly),
                fmt(Algorithm::Stigmergy),
                fmt(Algorithm::StigmergyFlocking)
            );
        }
    }
    println!("\ncompletion times in ticks (1 tick = 1 s); lower is better");
}
