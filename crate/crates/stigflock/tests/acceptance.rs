//! Acceptance gate: one test per release criterion. Each test prints a
//! single `ACCEPTANCE <n>: PASS`/`FAIL` line so the whole gate can be read
//! off a `cargo test --test acceptance -- --nocapture` run.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stigflock::behavior::signed_angle_diff;
use stigflock::experiment::{run_grid, GridRow};
use stigflock::{
    Algorithm, ConfirmOutcome, FieldParams, GridEnvironment, PheromoneField, Scenario,
    ScenarioKind, SensorModel, SimParams, Simulation,
};

fn report(n: u32, name: &str, ok: bool, detail: &str) {
    println!("ACCEPTANCE {n} ({name}): {} — {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "acceptance criterion {n} ({name}) failed: {detail}");
}

// ---------------------------------------------------------------------------
// 1. Field-equation oracle: step() against an independent brute-force kernel.
// ---------------------------------------------------------------------------

/// Straight transcription of the update rule, written independently of the
/// production kernel: new = ε·[(1−δ)·p + Δp + (δ/8)·Σ in-bounds neighbors p],
/// obstacle cells pinned to zero (shares flowing into them are destroyed).
#[allow(clippy::too_many_arguments)]
fn oracle_step(
    w: usize,
    h: usize,
    cur: &[f64],
    pend: &[f64],
    obst: &[bool],
    delta: f64,
    eps: f64,
) -> Vec<f64> {
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if obst[i] {
                continue;
            }
            let mut inflow = 0.0;
            for dy in -1i64..=1 {
                for dx in -1i64..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (nx, ny) = (x as i64 + dx, y as i64 + dy);
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    inflow += cur[ny as usize * w + nx as usize];
                }
            }
            out[i] = eps * ((1.0 - delta) * cur[i] + pend[i] + delta / 8.0 * inflow);
        }
    }
    out
}

#[test]
fn criterion_1_field_equation_oracle() {
    let start = Instant::now();
    let (w, h) = (20, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let obst: Vec<bool> = (0..w * h).map(|_| rng.gen_bool(0.08)).collect();
        let blocked: Vec<(usize, usize)> = obst
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i % w, i / w))
            .collect();
        let mut field = PheromoneField::with_obstacles(w, h, blocked);
        let mut cur = vec![0.0; w * h];
        let mut pend = vec![0.0; w * h];
        for y in 0..h {
            for x in 0..w {
                if obst[y * w + x] {
                    continue;
                }
                let v = rng.gen::<f64>() * 1000.0;
                field.set((x, y), v).unwrap();
                cur[y * w + x] = v;
                if rng.gen_bool(0.2) {
                    let d = rng.gen::<f64>() * 40_000.0;
                    field.deposit((x, y), d).unwrap();
                    pend[y * w + x] += d;
                }
            }
        }
        let delta = rng.gen::<f64>();
        let eps = rng.gen::<f64>();
        let expected = oracle_step(w, h, &cur, &pend, &obst, delta, eps);
        field.step(&FieldParams::new(delta, eps, 1.0));
        for y in 0..h {
            for x in 0..w {
                let got = field.intensity((x, y));
                let want = expected[y * w + x];
                let rel = (got - want).abs() / want.abs().max(1.0);
                worst = worst.max(rel);
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = worst <= 1e-12 && elapsed.as_secs_f64() < 10.0;
    report(
        1,
        "field-equation oracle",
        ok,
        &format!("1000 randomized 20x20 cases, worst relative error {worst:.2e}, {elapsed:.2?}"),
    );
}

// ---------------------------------------------------------------------------
// 2. Interior mass law: away from boundaries, one step scales mass by ε.
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_interior_mass_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = 24;
        let mut field = PheromoneField::new(n, n);
        // support at least 2 cells from every boundary
        for y in 2..n - 2 {
            for x in 2..n - 2 {
                field.set((x, y), rng.gen::<f64>() * 500.0).unwrap();
            }
        }
        let prior = field.total_mass();
        let eps = 0.5 + rng.gen::<f64>() * 0.5;
        let delta = rng.gen::<f64>();
        field.step(&FieldParams::new(delta, eps, 1.0));
        let rel = (field.total_mass() - eps * prior).abs() / (eps * prior);
        worst = worst.max(rel);
    }
    report(
        2,
        "interior mass law",
        worst <= 1e-9,
        &format!("100 random fields, worst relative mass error {worst:.2e}"),
    );
}

// ---------------------------------------------------------------------------
// 3. Sensor statistics: flip rate on/off the error halo.
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_sensor_statistics() {
    let env = GridEnvironment::new(20, 20, [], [(10, 10)]).unwrap();
    let model = SensorModel::new(0.5, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let n = 10_000;
    let hits = (0..n).filter(|_| env.sense(&model, (10, 10), &mut rng).positive).count();
    let rate = hits as f64 / n as f64;
    let sigma = (0.25 / n as f64).sqrt();
    let on_halo_ok = (rate - 0.5).abs() <= 3.0 * sigma;
    let far_flips = (0..n).filter(|_| env.sense(&model, (2, 2), &mut rng).positive).count();
    let ok = on_halo_ok && far_flips == 0;
    report(
        3,
        "sensor statistics",
        ok,
        &format!("target-cell positive rate {rate:.4} (3 sigma = {:.4}), far-cell flips {far_flips}", 3.0 * sigma),
    );
}

// ---------------------------------------------------------------------------
// 4. Confirmation semantics over scripted micro-worlds.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_confirmation_semantics() {
    let targets = [(2usize, 2usize), (5, 5), (7, 3)];
    let non_targets = [(0usize, 0usize), (3, 2), (5, 6), (9, 9)];
    let mut ok = true;
    let mut detail = String::new();
    for redundancy in 1..=5u32 {
        let model = SensorModel::new(0.0, redundancy);
        let mut env = GridEnvironment::new(10, 10, [], targets).unwrap();
        let mut last_fraction = 0.0;
        // false positives never accrue anything, from any drone
        for drone in 0..5 {
            for &c in &non_targets {
                if env.record_detection(&model, drone, c) != ConfirmOutcome::Ignored {
                    ok = false;
                    detail = format!("non-target {c:?} not ignored at R={redundancy}");
                }
            }
        }
        for (ti, &t) in targets.iter().enumerate() {
            // same drone repeating is idempotent
            for _ in 0..3 {
                let out = env.record_detection(&model, 0, t);
                let want =
                    if redundancy == 1 { ConfirmOutcome::NewlyConfirmed } else { ConfirmOutcome::Counted };
                let want = if env.is_confirmed(t) && out == ConfirmOutcome::Ignored {
                    ConfirmOutcome::Ignored
                } else {
                    want
                };
                if out != want {
                    ok = false;
                    detail = format!("idempotency broken at R={redundancy} target {ti}");
                }
            }
            // distinct drones push the count to exactly R
            for drone in 1..5 {
                let before = env.is_confirmed(t);
                let out = env.record_detection(&model, drone, t);
                let distinct = drone + 1; // drones 0..=drone have reported
                if before {
                    if out != ConfirmOutcome::Ignored {
                        ok = false;
                        detail = format!("confirmed target not ignored at R={redundancy}");
                    }
                } else if distinct == redundancy {
                    if out != ConfirmOutcome::NewlyConfirmed {
                        ok = false;
                        detail = format!("no confirm at count {distinct}, R={redundancy}");
                    }
                } else if distinct < redundancy && out != ConfirmOutcome::Counted {
                    ok = false;
                    detail = format!("expected Counted at count {distinct}, R={redundancy}");
                }
                let f = env.found_fraction();
                if f < last_fraction {
                    ok = false;
                    detail = "found_fraction decreased".into();
                }
                last_fraction = f;
            }
            if !env.is_confirmed(t) {
                ok = false;
                detail = format!("target {ti} unconfirmed after 5 distinct drones, R={redundancy}");
            }
        }
        // confirmed set contains only true targets
        for y in 0..10 {
            for x in 0..10 {
                if env.is_confirmed((x, y)) && !targets.contains(&(x, y)) {
                    ok = false;
                    detail = format!("phantom confirmation at ({x},{y})");
                }
            }
        }
        if (env.found_fraction() - 1.0).abs() > 1e-12 {
            ok = false;
            detail = format!("found_fraction != 1 after all confirmed, R={redundancy}");
        }
    }
    report(
        4,
        "confirmation semantics",
        ok,
        if detail.is_empty() { "redundancy 1..=5, 5 drones, 3 targets, exhaustive scripts" } else { &detail },
    );
}

// ---------------------------------------------------------------------------
// 5 + 6. Algorithm ordering and redundancy scaling. The two criteria share
// one 2-scenario x 3-algorithm x 3-redundancy x 10-trial grid.
// ---------------------------------------------------------------------------

const ORDERING_SEED: u64 = 10;

fn ordering_grid() -> &'static [GridRow] {
    static GRID: OnceLock<Vec<GridRow>> = OnceLock::new();
    GRID.get_or_init(|| {
        let scenarios = vec![
            Scenario::generate(ScenarioKind::Field, ORDERING_SEED),
            Scenario::generate(ScenarioKind::Dumps, ORDERING_SEED),
        ];
        run_grid(
            &scenarios,
            &[Algorithm::RandomFly, Algorithm::Stigmergy, Algorithm::StigmergyFlocking],
            &[1, 3, 5],
            &SimParams::default(),
            ORDERING_SEED,
            10,
        )
    })
}

fn cell<'a>(rows: &'a [GridRow], scenario: &str, algo: Algorithm, redundancy: u32) -> &'a GridRow {
    rows.iter()
        .find(|r| r.scenario == scenario && r.algorithm == algo && r.redundancy == redundancy)
        .expect("grid cell present")
}

#[test]
fn criterion_5_algorithm_ordering() {
    let rows = ordering_grid();
    let mut ok = true;
    let mut lines = Vec::new();
    for scenario in ["field", "dumps"] {
        for redundancy in [1u32, 3, 5] {
            let r = cell(rows, scenario, Algorithm::RandomFly, redundancy);
            let s = cell(rows, scenario, Algorithm::Stigmergy, redundancy);
            let sf = cell(rows, scenario, Algorithm::StigmergyFlocking, redundancy);
            for c in [r, s, sf] {
                if c.stats.timeouts > 0 || !c.stats.valid() {
                    ok = false;
                }
            }
            let order_ok = sf.stats.mean < s.stats.mean && s.stats.mean < r.stats.mean;
            let ci_ok = sf.stats.mean + sf.stats.ci95_halfwidth < r.stats.mean - r.stats.ci95_halfwidth;
            ok &= order_ok && ci_ok;
            lines.push(format!(
                "{scenario}/R{redundancy}: S+F {:.0}±{:.0} < S {:.0}±{:.0} < R {:.0}±{:.0} order={order_ok} ci={ci_ok}",
                sf.stats.mean,
                sf.stats.ci95_halfwidth,
                s.stats.mean,
                s.stats.ci95_halfwidth,
                r.stats.mean,
                r.stats.ci95_halfwidth,
            ));
        }
    }
    report(5, "algorithm ordering", ok, &lines.join("; "));
}

#[test]
fn criterion_6_redundancy_scaling() {
    let rows = ordering_grid();
    let mut ok = true;
    let mut detail = Vec::new();
    for algo in [Algorithm::RandomFly, Algorithm::Stigmergy, Algorithm::StigmergyFlocking] {
        let m: Vec<f64> =
            [1, 3, 5].iter().map(|&r| cell(rows, "field", algo, r).stats.mean).collect();
        let monotone = m[0] <= m[1] && m[1] <= m[2];
        ok &= monotone;
        detail.push(format!("{} {:.0}/{:.0}/{:.0} monotone={monotone}", algo.label(), m[0], m[1], m[2]));
    }
    let ratio = |r: u32| {
        cell(rows, "field", Algorithm::RandomFly, r).stats.mean
            / cell(rows, "field", Algorithm::StigmergyFlocking, r).stats.mean
    };
    let (r1, r5) = (ratio(1), ratio(5));
    ok &= r5 > r1;
    detail.push(format!("R:S+F ratio {r1:.2} -> {r5:.2}"));
    report(6, "redundancy scaling", ok, &detail.join("; "));
}

// ---------------------------------------------------------------------------
// 7. Determinism: per-trial results identical across worker counts and runs.
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_determinism() {
    // Short-capped grid keeps the runtime reasonable while exercising every
    // algorithm: determinism is independent of how long trials run.
    let mut params = SimParams::default();
    params.tick_cap = 400;
    let scenarios = vec![
        Scenario::generate(ScenarioKind::Field, 5),
        Scenario::generate(ScenarioKind::Dumps, 5),
    ];
    let algorithms =
        [Algorithm::RandomFly, Algorithm::Stigmergy, Algorithm::StigmergyFlocking];
    let run_with = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let rows =
            pool.install(|| run_grid(&scenarios, &algorithms, &[1, 3], &params, 5, 4));
        let mut csv = Vec::new();
        stigflock::experiment::write_trials_csv(&rows, &mut csv).unwrap();
        csv
    };
    let one = run_with(1);
    let eight = run_with(8);
    let eight_again = run_with(8);
    let ok = one == eight && eight == eight_again;
    report(
        7,
        "determinism",
        ok,
        &format!(
            "per-trial CSVs: 1 vs 8 workers identical={}, repeated run byte-identical={}",
            one == eight,
            eight == eight_again
        ),
    );
}

// ---------------------------------------------------------------------------
// 8. Scenario census across 100 seeds.
// ---------------------------------------------------------------------------

#[test]
fn criterion_8_scenario_census() {
    // (kind, targets, clusters, trees, buildings, drones)
    let expected = [
        (ScenarioKind::Field, 50, 5, 0, 0, 80),
        (ScenarioKind::Dumps, 30, 3, 100, 0, 80),
        (ScenarioKind::Urban, 110, 2, 0, 7, 40),
        (ScenarioKind::UrbanMines, 40, 40, 54, 28, 25),
    ];
    let mut ok = true;
    let mut detail = String::from("100 seeds x 4 scenarios");
    for seed in 0..100u64 {
        for &(kind, targets, clusters, trees, buildings, drones) in &expected {
            let s = Scenario::generate(kind, seed);
            if let Err(e) = s.validate() {
                ok = false;
                detail = format!("{kind:?} seed {seed}: invalid: {e}");
                continue;
            }
            let m = &s.metadata;
            if (m.targets, m.clusters, m.trees, m.buildings, m.drones)
                != (targets, clusters, trees, buildings, drones)
                || s.targets.len() != targets
                || s.spawns.len() != drones
            {
                ok = false;
                detail = format!(
                    "{kind:?} seed {seed}: census {:?} != {:?}",
                    (m.targets, m.clusters, m.trees, m.buildings, m.drones),
                    (targets, clusters, trees, buildings, drones)
                );
            }
        }
    }
    report(8, "scenario census", ok, &detail);
}

// ---------------------------------------------------------------------------
// 9. Behavior invariants under a long fuzz run.
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_behavior_invariants() {
    let scenario = Scenario::generate(ScenarioKind::Urban, 77);
    let params = SimParams::default(); // stigmergy + flocking
    let mut sim = Simulation::new(&scenario, &params, 909);
    let max_flock_turn = params.max_separate_turn.max(params.max_align_turn + params.max_cohere_turn);
    let mut ok = true;
    let mut detail = String::from("10000 ticks on urban, all per-tick invariants held");
    for tick in 1..=10_000u64 {
        let before: Vec<f64> = sim.drones.iter().map(|d| d.heading).collect();
        sim.step();
        let decisions = sim.last_decisions();
        if decisions.len() != sim.drones.len() {
            ok = false;
            detail = format!("tick {tick}: {} decisions for {} drones", decisions.len(), sim.drones.len());
            break;
        }
        let mut seen = vec![false; sim.drones.len()];
        for d in decisions {
            let i = d.drone as usize;
            if seen[i] {
                ok = false;
                detail = format!("tick {tick}: drone {i} decided twice");
            }
            seen[i] = true;
            if d.role == stigflock::Role::Flockmate {
                let turn = signed_angle_diff(before[i], d.new_heading).abs();
                if turn > max_flock_turn + 1e-9 {
                    ok = false;
                    detail = format!("tick {tick}: flock turn {turn:.2} exceeds {max_flock_turn}");
                }
            }
        }
        for d in &sim.drones {
            let cell = (d.position.0 as usize, d.position.1 as usize);
            if !sim.env.in_bounds(cell) || sim.env.is_obstacle(cell) {
                ok = false;
                detail = format!("tick {tick}: drone {} at {:?} inside obstacle or out of bounds", d.id, d.position);
            }
        }
        if !ok {
            break;
        }
    }
    report(9, "behavior invariants", ok, &detail);
}
