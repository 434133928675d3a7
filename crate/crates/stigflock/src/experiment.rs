//! Experiment harness: seeded trials to termination, mean ± 95% CI
//! aggregation, the full algorithm × redundancy × scenario grid, and a
//! simple parameter sweep with an optional bisection mode.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::field::Cell;
use crate::params::{Algorithm, ParamError, SimParams};
use crate::rng;
use crate::scenario::Scenario;
use crate::sim::Simulation;

/// Everything needed to run one trial.
#[derive(Debug, Clone)]
pub struct TrialConfig<'a> {
    pub scenario: &'a Scenario,
    pub params: SimParams,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialOutcome {
    /// Tick at which the termination fraction was reached (inclusive of the
    /// confirming tick).
    Completed(u64),
    /// Tick cap reached first.
    Timeout,
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub outcome: TrialOutcome,
    pub confirmed: usize,
    pub seed: u64,
    /// (cell, tick) per confirmed target, in confirmation order.
    pub confirmation_log: Vec<(Cell, u64)>,
}

impl TrialResult {
    /// Completion ticks, or the tick cap for timeouts (for CSV reporting).
    pub fn ticks(&self) -> Option<u64> {
        match self.outcome {
            TrialOutcome::Completed(t) => Some(t),
            TrialOutcome::Timeout => None,
        }
    }
}

/// Simulate until the found fraction reaches the termination fraction or the
/// tick cap; deterministic in `config.seed`.
pub fn run_trial(config: &TrialConfig) -> TrialResult {
    run_trial_observed(config, |_| {})
}

/// Like [`run_trial`], invoking `observer` with the simulation after every
/// tick (trace dumps, invariant checks).
pub fn run_trial_observed(
    config: &TrialConfig,
    mut observer: impl FnMut(&Simulation),
) -> TrialResult {
    let mut sim = Simulation::new(config.scenario, &config.params, config.seed);
    let goal = config.params.termination_fraction;
    let mut outcome = TrialOutcome::Timeout;
    while sim.tick_count() < config.params.tick_cap {
        sim.step();
        observer(&sim);
        if sim.found_fraction() >= goal {
            outcome = TrialOutcome::Completed(sim.tick_count());
            break;
        }
    }
    TrialResult {
        outcome,
        confirmed: sim.env.confirmed_count(),
        seed: config.seed,
        confirmation_log: sim.confirmation_log().to_vec(),
    }
}

/// Sample mean and 95% confidence interval of completion times.
#[derive(Debug, Clone)]
pub struct ExperimentStats {
    /// Completed-trial count contributing to the mean.
    pub n: usize,
    pub mean: f64,
    /// Student-t half-width: t(0.975, n−1) · s/√n. Zero when n < 2.
    pub ci95_halfwidth: f64,
    /// Completion ticks of the non-timeout trials.
    pub samples: Vec<f64>,
    pub timeouts: usize,
}

impl ExperimentStats {
    /// At least two completed trials are needed for a CI.
    pub fn valid(&self) -> bool {
        self.n >= 2
    }

    pub fn from_samples(samples: Vec<f64>, timeouts: usize) -> ExperimentStats {
        let n = samples.len();
        if n == 0 {
            return ExperimentStats { n, mean: f64::NAN, ci95_halfwidth: f64::NAN, samples, timeouts };
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let ci95_halfwidth = if n >= 2 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
                .expect("valid t distribution")
                .inverse_cdf(0.975);
            t * (var / n as f64).sqrt()
        } else {
            0.0
        };
        ExperimentStats { n, mean, ci95_halfwidth, samples, timeouts }
    }
}

/// Run `n_trials` trials with seeds derived from `master_seed` and aggregate
/// their completion times. Trials execute in parallel on the current rayon
/// pool; results are identical for any worker count.
pub fn run_experiment(
    scenario: &Scenario,
    params: &SimParams,
    master_seed: u64,
    n_trials: usize,
) -> (ExperimentStats, Vec<TrialResult>) {
    assert!(n_trials >= 2, "need at least 2 trials for a confidence interval");
    let results: Vec<TrialResult> = (0..n_trials)
        .into_par_iter()
        .map(|i| {
            let config = TrialConfig {
                scenario,
                params: params.clone(),
                seed: rng::derive_seed(master_seed, "trial", i as u64),
            };
            run_trial(&config)
        })
        .collect();
    let samples: Vec<f64> = results.iter().filter_map(|r| r.ticks()).map(|t| t as f64).collect();
    let timeouts = results.len() - samples.len();
    (ExperimentStats::from_samples(samples, timeouts), results)
}

/// One cell of the experiment grid.
#[derive(Debug, Clone)]
pub struct GridRow {
    pub scenario: String,
    pub algorithm: Algorithm,
    pub redundancy: u32,
    pub n_trials: usize,
    pub stats: ExperimentStats,
    pub master_seed: u64,
    pub trials: Vec<TrialResult>,
}

/// Full cross product of scenarios × algorithms × redundancies.
pub fn run_grid(
    scenarios: &[Scenario],
    algorithms: &[Algorithm],
    redundancies: &[u32],
    base_params: &SimParams,
    master_seed: u64,
    n_trials: usize,
) -> Vec<GridRow> {
    assert!(!scenarios.is_empty() && !algorithms.is_empty() && !redundancies.is_empty());
    let mut rows = Vec::new();
    for scenario in scenarios {
        for &algorithm in algorithms {
            for &redundancy in redundancies {
                let mut params = base_params.clone();
                params.algorithm = algorithm;
                params.redundancy = redundancy;
                let (stats, trials) = run_experiment(scenario, &params, master_seed, n_trials);
                rows.push(GridRow {
                    scenario: scenario.name.clone(),
                    algorithm,
                    redundancy,
                    n_trials,
                    stats,
                    master_seed,
                    trials,
                });
            }
        }
    }
    rows
}

/// Summary CSV: one row per grid cell.
pub fn write_results_csv<W: std::io::Write>(rows: &[GridRow], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "scenario,algorithm,redundancy,n_trials,mean_ticks,ci95_halfwidth,timeouts,master_seed"
    )?;
    for r in rows {
        let (mean, hw) = if r.stats.valid() {
            (format!("{}", r.stats.mean), format!("{}", r.stats.ci95_halfwidth))
        } else {
            ("invalid".into(), "invalid".into())
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.scenario,
            r.algorithm.label(),
            r.redundancy,
            r.n_trials,
            mean,
            hw,
            r.stats.timeouts,
            r.master_seed
        )?;
    }
    Ok(())
}

/// Per-trial CSV: one row per trial of every grid cell.
pub fn write_trials_csv<W: std::io::Write>(rows: &[GridRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "scenario,algorithm,redundancy,trial_index,seed,ticks,confirmed")?;
    for r in rows {
        for (i, t) in r.trials.iter().enumerate() {
            let ticks = match t.ticks() {
                Some(t) => t.to_string(),
                None => "TIMEOUT".into(),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.scenario,
                r.algorithm.label(),
                r.redundancy,
                i,
                t.seed,
                ticks,
                t.confirmed
            )?;
        }
    }
    Ok(())
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Stats for each candidate value of one tunable, plus the argmin.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub parameter: String,
    pub entries: Vec<(f64, ExperimentStats)>,
    /// Candidate value with the smallest mean completion time.
    pub best: f64,
}

/// Evaluate a named tunable at each candidate value.
pub fn sweep(
    parameter: &str,
    values: &[f64],
    scenario: &Scenario,
    base_params: &SimParams,
    master_seed: u64,
    n_trials: usize,
) -> Result<SweepReport, SweepError> {
    assert!(!values.is_empty());
    let mut entries = Vec::with_capacity(values.len());
    for &v in values {
        let mut params = base_params.clone();
        params.set_by_name(parameter, &v.to_string())?;
        let (stats, _) = run_experiment(scenario, &params, master_seed, n_trials);
        entries.push((v, stats));
    }
    let best = entries
        .iter()
        .filter(|(_, s)| s.valid())
        .min_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
        .map(|(v, _)| *v)
        .unwrap_or(values[0]);
    Ok(SweepReport { parameter: parameter.to_string(), entries, best })
}

/// Interval-halving minimizer for a unimodal response: compares the two
/// inner third points and discards the outer third each round, until the
/// interval is narrower than `tol`. Returns the interval midpoint.
pub fn minimize_unimodal(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    assert!(lo < hi && tol > 0.0);
    while hi - lo > tol {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    (lo + hi) / 2.0
}

/// Bisection sweep: narrow `[lo, hi]` to `tol`, minimizing mean completion
/// time of the named tunable.
pub fn sweep_bisect(
    parameter: &str,
    lo: f64,
    hi: f64,
    tol: f64,
    scenario: &Scenario,
    base_params: &SimParams,
    master_seed: u64,
    n_trials: usize,
) -> Result<f64, SweepError> {
    // probe the endpoints first so range errors surface before the search
    let mut probe = base_params.clone();
    probe.set_by_name(parameter, &lo.to_string())?;
    probe.set_by_name(parameter, &hi.to_string())?;
    Ok(minimize_unimodal(
        |v| {
            let mut params = base_params.clone();
            params
                .set_by_name(parameter, &v.to_string())
                .expect("interior of a validated interval");
            let (stats, _) = run_experiment(scenario, &params, master_seed, n_trials);
            stats.mean
        },
        lo,
        hi,
        tol,
    ))
}
