//! Run one seeded trial and print the confirmation timeline.
//!
//! A trial steps the simulation until 95% of the targets are confirmed by
//! the required number of distinct drones (or a tick cap is hit). The
//! example prints each confirmation as it lands and the final completion
//! time in ticks (1 tick = 1 s).
//!
//! Run: cargo run --example single_trial [--] [SCENARIO] [ALGO] [REDUNDANCY] [SEED]
//!   SCENARIO: field | dumps | urban | urban_mines   (default field)
//!   ALGO:     r | s | sf                            (default sf)

use stigflock::{run_trial, Algorithm, Scenario, ScenarioKind, SimParams, TrialConfig, TrialOutcome};

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

    println!(
        "{} / {} / redundancy {} / seed {} — {} targets, confirming {:.0}%\n",
        scenario.name,
        algo.label(),
        redundancy,
        seed,
        scenario.targets.len(),
        params.termination_fraction * 100.0
    );
    let result = run_trial(&TrialConfig { scenario: &scenario, params, seed });
    for (i, (cell, tick)) in result.confirmation_log.iter().enumerate() {
        println!("  #{:>3}  tick {tick:>6}  target {cell:?}", i + 1);
    }
    match result.outcome {
        TrialOutcome::Completed(t) => println!("\ncompleted at tick {t} ({} confirmed)", result.confirmed),
        TrialOutcome::Timeout => println!("\nTIMEOUT with {} confirmed", result.confirmed),
    }
}
