//! Command-line interface: scenario generation, single-trial runs with
//! trace dumps, full-grid reproduction, sweeps, and scenario validation.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error. All randomness is
//! controlled by `--seed` (env fallback `STIGFLOCK_SEED`); two invocations
//! with identical flags produce byte-identical result files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::experiment::{
    self, run_grid, run_trial_observed, sweep, sweep_bisect, TrialConfig, TrialOutcome,
};
use crate::params::{Algorithm, SimParams};
use crate::scenario::{Scenario, ScenarioKind};

#[derive(Parser)]
#[command(name = "stigflock", version, about = "Drone swarm target-search simulator")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ScenarioSource {
    /// Scenario file to load.
    #[arg(long, conflicts_with = "name")]
    scenario: Option<PathBuf>,
    /// Built-in scenario name: field | dumps | urban | urban_mines.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args, Clone)]
struct CommonRun {
    /// Master seed; required for reproducibility.
    #[arg(long, env = "STIGFLOCK_SEED")]
    seed: u64,
    /// Parameter override, NAME=VALUE with the published parameter names
    /// (case-insensitive). Repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
    /// Worker threads for trial execution (1 = fully sequential).
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in benchmark scenario file.
    Generate {
        /// Scenario name: field | dumps | urban | urban_mines.
        #[arg(long)]
        name: String,
        #[arg(long, env = "STIGFLOCK_SEED")]
        seed: u64,
        /// Output path for the scenario file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a single trial.
    Run {
        #[command(flatten)]
        source: ScenarioSource,
        #[command(flatten)]
        common: CommonRun,
        /// Algorithm: r | s | sf.
        #[arg(long, default_value = "sf")]
        algo: String,
        #[arg(long, default_value_t = 1)]
        redundancy: u32,
        /// Write a one-row per-trial CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a per-tick drone trace CSV here (large).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Dump field snapshots every N ticks, as <prefix>.tick<N>.csv next
        /// to --out (or ./field in the working directory).
        #[arg(long, value_name = "N")]
        field_dump_every: Option<u64>,
    },
    /// Run the scenario × algorithm × redundancy grid.
    Grid {
        #[command(flatten)]
        common: CommonRun,
        /// Comma-separated scenario names (default: all four).
        #[arg(long, default_value = "field,dumps,urban,urban_mines")]
        scenarios: String,
        /// Comma-separated algorithms (default: r,s,sf).
        #[arg(long, default_value = "r,s,sf")]
        algos: String,
        /// Comma-separated redundancy values (default: 1,3,5).
        #[arg(long, default_value = "1,3,5")]
        redundancies: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Summary CSV output path.
        #[arg(long)]
        out: PathBuf,
        /// Optional per-trial CSV output path.
        #[arg(long)]
        trials_out: Option<PathBuf>,
    },
    /// Sweep one parameter over candidate values, or bisect an interval.
    Sweep {
        #[command(flatten)]
        source: ScenarioSource,
        #[command(flatten)]
        common: CommonRun,
        /// Parameter to sweep (published names, case-insensitive).
        #[arg(long)]
        param: String,
        /// Comma-separated candidate values.
        #[arg(long, conflicts_with = "bisect")]
        values: Option<String>,
        /// Bisection mode: LO,HI,TOL.
        #[arg(long, value_name = "LO,HI,TOL")]
        bisect: Option<String>,
        #[arg(long, default_value = "sf")]
        algo: String,
        #[arg(long, default_value_t = 1)]
        redundancy: u32,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        /// Sweep results CSV output path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a scenario file.
    Validate {
        #[arg(long)]
        scenario: PathBuf,
    },
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

/// Entry point; returns the process exit code.
pub fn main(argv: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn parse_kind(name: &str) -> Result<ScenarioKind, CliError> {
    ScenarioKind::parse(name).ok_or_else(|| {
        CliError::Usage(format!("unknown scenario name `{name}` (field, dumps, urban, urban_mines)"))
    })
}

fn load_scenario(source: &ScenarioSource, seed: u64) -> Result<Scenario, CliError> {
    match (&source.scenario, &source.name) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read scenario file {}: {e}", path.display()))
            })?;
            Scenario::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
        (None, Some(name)) => Ok(Scenario::generate(parse_kind(name)?, seed)),
        (None, None) => Err(CliError::Usage("provide --scenario FILE or --name NAME".into())),
    }
}

fn apply_overrides(params: &mut SimParams, sets: &[String]) -> Result<(), CliError> {
    for entry in sets {
        let (name, value) = entry
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--set expects NAME=VALUE, got `{entry}`")))?;
        params.set_by_name(name, value).map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn parse_algo(s: &str) -> Result<Algorithm, CliError> {
    Algorithm::parse(s)
        .ok_or_else(|| CliError::Usage(format!("unknown algorithm `{s}` (expected r, s, or sf)")))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|_| CliError::Usage(format!("bad {what} `{p}`"))))
        .collect()
}

fn install_worker_pool(workers: usize) -> Result<(), CliError> {
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Runtime(e.to_string()))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { name, seed, out } => {
            let scenario = Scenario::generate(parse_kind(&name)?, seed);
            write_file(&out, scenario.serialize().as_bytes())?;
            println!(
                "wrote {} ({} targets, {} obstacles, {} drones)",
                out.display(),
                scenario.targets.len(),
                scenario.obstacles.len(),
                scenario.spawns.len()
            );
            Ok(())
        }
        Command::Run { source, common, algo, redundancy, out, trace, field_dump_every } => {
            install_worker_pool(common.workers)?;
            let scenario = load_scenario(&source, common.seed)?;
            let mut params = SimParams::default();
            params.algorithm = parse_algo(&algo)?;
            params.redundancy = redundancy;
            apply_overrides(&mut params, &common.set)?;

            let mut trace_out: Option<Box<dyn Write>> = match &trace {
                Some(p) => {
                    let mut f = fs::File::create(p)
                        .map_err(|e| CliError::Runtime(format!("cannot create trace: {e}")))?;
                    writeln!(f, "tick,drone,role,x,y,heading")?;
                    Some(Box::new(f))
                }
                None => None,
            };
            let dump_prefix: PathBuf = out.clone().unwrap_or_else(|| PathBuf::from("field"));
            let mut trace_err = None;
            let config =
                TrialConfig { scenario: &scenario, params: params.clone(), seed: common.seed };
            let result = run_trial_observed(&config, |sim| {
                if let Some(w) = trace_out.as_mut() {
                    for d in sim.last_decisions() {
                        if let Err(e) = writeln!(
                            w,
                            "{},{},{},{},{},{}",
                            sim.tick_count(),
                            d.drone,
                            d.role.label(),
                            d.new_position.0,
                            d.new_position.1,
                            d.new_heading
                        ) {
                            trace_err.get_or_insert(e);
                        }
                    }
                }
                if let Some(n) = field_dump_every {
                    if n > 0 && sim.tick_count() % n == 0 {
                        let path =
                            dump_prefix.with_extension(format!("tick{}.csv", sim.tick_count()));
                        if let Err(e) =
                            fs::File::create(&path).and_then(|f| sim.field.write_snapshot(f))
                        {
                            trace_err.get_or_insert(e);
                        }
                    }
                }
            });
            if let Some(e) = trace_err {
                return Err(CliError::Runtime(format!("trace/dump write failed: {e}")));
            }
            let ticks = match result.outcome {
                TrialOutcome::Completed(t) => t.to_string(),
                TrialOutcome::Timeout => "TIMEOUT".into(),
            };
            println!(
                "scenario={} algo={} redundancy={} seed={} ticks={} confirmed={}",
                scenario.name,
                params.algorithm.label(),
                redundancy,
                common.seed,
                ticks,
                result.confirmed
            );
            if let Some(out) = out {
                let mut buf = Vec::new();
                writeln!(buf, "scenario,algorithm,redundancy,trial_index,seed,ticks,confirmed")?;
                writeln!(
                    buf,
                    "{},{},{},0,{},{},{}",
                    scenario.name,
                    params.algorithm.label(),
                    redundancy,
                    common.seed,
                    ticks,
                    result.confirmed
                )?;
                write_file(&out, &buf)?;
            }
            Ok(())
        }
        Command::Grid { common, scenarios, algos, redundancies, trials, out, trials_out } => {
            install_worker_pool(common.workers)?;
            let mut params = SimParams::default();
            apply_overrides(&mut params, &common.set)?;
            let scenario_list: Vec<Scenario> = scenarios
                .split(',')
                .map(|n| Ok(Scenario::generate(parse_kind(n.trim())?, common.seed)))
                .collect::<Result<_, CliError>>()?;
            let algorithms: Vec<Algorithm> =
                algos.split(',').map(|a| parse_algo(a.trim())).collect::<Result<_, _>>()?;
            let redundancy_list: Vec<u32> = parse_list(&redundancies, "redundancy")?;
            if trials < 2 {
                return Err(CliError::Usage("--trials must be at least 2".into()));
            }
            let rows = run_grid(
                &scenario_list,
                &algorithms,
                &redundancy_list,
                &params,
                common.seed,
                trials,
            );
            let mut buf = Vec::new();
            experiment::write_results_csv(&rows, &mut buf)?;
            write_file(&out, &buf)?;
            if let Some(path) = trials_out {
                let mut buf = Vec::new();
                experiment::write_trials_csv(&rows, &mut buf)?;
                write_file(&path, &buf)?;
            }
            println!("wrote {} ({} rows)", out.display(), rows.len());
            Ok(())
        }
        Command::Sweep {
            source,
            common,
            param,
            values,
            bisect,
            algo,
            redundancy,
            trials,
            out,
        } => {
            install_worker_pool(common.workers)?;
            let scenario = load_scenario(&source, common.seed)?;
            let mut params = SimParams::default();
            params.algorithm = parse_algo(&algo)?;
            params.redundancy = redundancy;
            apply_overrides(&mut params, &common.set)?;
            match (values, bisect) {
                (Some(values), None) => {
                    let values: Vec<f64> = parse_list(&values, "value")?;
                    let report =
                        sweep(&param, &values, &scenario, &params, common.seed, trials)
                            .map_err(|e| CliError::Usage(e.to_string()))?;
                    let mut buf = Vec::new();
                    writeln!(buf, "parameter,value,n_trials,mean_ticks,ci95_halfwidth,timeouts")?;
                    for (v, s) in &report.entries {
                        writeln!(
                            buf,
                            "{},{},{},{},{},{}",
                            report.parameter, v, s.n, s.mean, s.ci95_halfwidth, s.timeouts
                        )?;
                    }
                    writeln!(buf, "# argmin {}={}", report.parameter, report.best)?;
                    match out {
                        Some(path) => write_file(&path, &buf)?,
                        None => print!("{}", String::from_utf8_lossy(&buf)),
                    }
                    println!("argmin {}={}", report.parameter, report.best);
                    Ok(())
                }
                (None, Some(spec)) => {
                    let parts: Vec<f64> = parse_list(&spec, "bisect bound")?;
                    let [lo, hi, tol] = parts[..] else {
                        return Err(CliError::Usage("--bisect expects LO,HI,TOL".into()));
                    };
                    let best = sweep_bisect(
                        &param, lo, hi, tol, &scenario, &params, common.seed, trials,
                    )
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                    println!("argmin {param}={best}");
                    if let Some(path) = out {
                        write_file(&path, format!("parameter,best\n{param},{best}\n").as_bytes())?;
                    }
                    Ok(())
                }
                _ => Err(CliError::Usage("provide exactly one of --values or --bisect".into())),
            }
        }
        Command::Validate { scenario } => {
            let text = fs::read_to_string(&scenario).map_err(|e| {
                CliError::Usage(format!("cannot read {}: {e}", scenario.display()))
            })?;
            let s = Scenario::parse(&text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", scenario.display())))?;
            println!(
                "{} ok: grid {}x{}, {} targets, {} obstacle cells, {} drones",
                scenario.display(),
                s.grid_size,
                s.grid_size,
                s.targets.len(),
                s.obstacles.len(),
                s.spawns.len()
            );
            Ok(())
        }
    }
}
