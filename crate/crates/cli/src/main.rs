//! `mdc`: run, sweep, validate and dump UAV task allocation scenarios.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 the slot
//! ceiling (`max_slots`) was hit before the allocation finished.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use mdc_core::allocator::{run as allocate, Algorithm, AllocError};
use mdc_core::experiment::{run_all, ExperimentError, Family};
use mdc_core::report::{self, collect_metrics, improvement_pct, scenario_hash};
use mdc_core::scenario::{generate_scenario, ScenarioConfig, TakeoffPlacement};

const EXIT_USAGE: u8 = 1;
const EXIT_GUARD: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "mdc",
    version,
    about = "Maritime UAV data-collection task allocation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Sc,
    Cd,
    Both,
}

impl AlgorithmArg {
    fn selected(self) -> Vec<Algorithm> {
        match self {
            AlgorithmArg::Sc => vec![Algorithm::Sc],
            AlgorithmArg::Cd => vec![Algorithm::Cd],
            AlgorithmArg::Both => vec![Algorithm::Sc, Algorithm::Cd],
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    Hover,
    Takeoff,
    Distribution,
    #[value(name = "uav_count")]
    UavCount,
    All,
}

impl FamilyArg {
    fn families(self) -> Vec<Family> {
        match self {
            FamilyArg::Hover => vec![Family::Hover],
            FamilyArg::Takeoff => vec![Family::Takeoff],
            FamilyArg::Distribution => vec![Family::Distribution],
            FamilyArg::UavCount => vec![Family::UavCount],
            FamilyArg::All => Family::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario with SC-MDC-TA, CD-MDC-TA or both
    Run {
        /// Config file (TOML) or the preset name `paper_default`
        #[arg(long, default_value = "paper_default")]
        config: String,
        #[arg(long, value_enum, default_value_t = AlgorithmArg::Both)]
        algorithm: AlgorithmArg,
        /// Output directory for metrics and leg logs
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the scenario seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run experiment families with paired seeds
    Sweep {
        #[arg(long, value_enum, default_value_t = FamilyArg::All)]
        family: FamilyArg,
        /// Replicates per variant
        #[arg(long, default_value_t = 30)]
        seeds: usize,
        /// Base config (TOML) or the preset name `paper_default`
        #[arg(long, default_value = "paper_default")]
        config: String,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Override the base seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Check a config and report every invariant
    Validate {
        #[arg(long)]
        config: String,
    },
    /// Generate a scenario without running it
    Dump {
        #[arg(long, default_value = "paper_default")]
        config: String,
        /// Directory for `scenario.txt` and a pinned `config.toml`; stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Failure class that decides the exit code.
#[derive(Debug)]
enum Failure {
    Usage(anyhow::Error),
    Guard(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        let guard = e.chain().any(|c| {
            matches!(
                c.downcast_ref::<AllocError>(),
                Some(AllocError::SlotCeiling { .. })
            ) || matches!(
                c.downcast_ref::<ExperimentError>(),
                Some(ExperimentError::Alloc {
                    source: AllocError::SlotCeiling { .. },
                    ..
                })
            )
        });
        if guard {
            Failure::Guard(e)
        } else {
            Failure::Usage(e)
        }
    }
}

fn load_config(spec: &str, seed: Option<u64>) -> Result<ScenarioConfig> {
    let mut config = match spec {
        "paper_default" | "default" => ScenarioConfig::paper_default(),
        path => ScenarioConfig::load(path).with_context(|| format!("loading config {path}"))?,
    };
    if let Some(seed) = seed {
        config.rng_seed = seed;
    }
    config.ensure_valid()?;
    Ok(config)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn cmd_run(config: &str, algorithm: AlgorithmArg, out: &Path, seed: Option<u64>) -> Result<()> {
    let config = load_config(config, seed)?;
    let scenario = generate_scenario(&config)?;
    let hash = scenario_hash(&scenario);
    create_dir(out)?;
    fs::write(out.join("scenario.txt"), scenario.to_snapshot())
        .with_context(|| format!("writing {}", out.join("scenario.txt").display()))?;

    let mut means = Vec::new();
    for alg in algorithm.selected() {
        let result = allocate(&scenario, alg)?;
        let metrics = collect_metrics(&result, &hash, config.rng_seed);
        let tag = alg.tag();
        report::write_legs(&out.join(format!("legs_{tag}.csv")), &result.assignments)?;
        report::write_returns(&out.join(format!("returns_{tag}.csv")), &result.returns)?;
        report::write_json(&out.join(format!("metrics_{tag}.json")), &metrics)?;
        println!(
            "{tag}: mean completion time {:.3} s, total energy {:.3} J, unserved {}",
            metrics.mean_completion_time, metrics.total_energy, metrics.unserved
        );
        means.push((metrics.mean_completion_time, metrics.total_energy));
    }
    if let [(sc_t, sc_e), (cd_t, cd_e)] = means[..] {
        println!(
            "improvement: time {:.2}%, energy {:.2}%",
            improvement_pct(cd_t, sc_t),
            improvement_pct(cd_e, sc_e)
        );
    }
    Ok(())
}

fn cmd_sweep(
    family: FamilyArg,
    seeds: usize,
    config: &str,
    out: &Path,
    seed: Option<u64>,
) -> Result<()> {
    if seeds < 1 {
        bail!("--seeds must be at least 1");
    }
    let base = load_config(config, seed)?;
    let outputs = run_all(&family.families(), &base, seeds, out)?;
    for o in &outputs {
        for s in &o.summaries {
            println!(
                "{}/{}: SC {:.2} s vs CD {:.2} s, time {:+.2}%, energy {:+.2}%",
                s.family,
                s.variant,
                s.sc_time_mean_s,
                s.cd_time_mean_s,
                s.time_improvement_pct,
                s.energy_improvement_pct
            );
        }
    }
    println!("wrote {} family tables to {}", outputs.len(), out.display());
    Ok(())
}

fn cmd_validate(config: &str) -> Result<()> {
    let config = match config {
        "paper_default" | "default" => ScenarioConfig::paper_default(),
        path => ScenarioConfig::load(path).with_context(|| format!("loading config {path}"))?,
    };
    let checks = config.checks();
    let mut failed = 0;
    for c in &checks {
        match &c.issue {
            None => println!("pass  {}", c.field),
            Some(msg) => {
                failed += 1;
                println!("FAIL  {}: {msg}", c.field);
            }
        }
    }
    for lint in config.lints() {
        println!("warn  {}: {}", lint.field, lint.message);
    }
    if failed > 0 {
        bail!("{failed} of {} invariants failed", checks.len());
    }
    println!("ok: {} invariants hold", checks.len());
    Ok(())
}

fn cmd_dump(config: &str, out: Option<&Path>, seed: Option<u64>) -> Result<()> {
    let config = load_config(config, seed)?;
    let scenario = generate_scenario(&config)?;
    let snapshot = scenario.to_snapshot();
    let Some(dir) = out else {
        print!("{snapshot}");
        return Ok(());
    };
    create_dir(dir)?;
    let mut pinned = config;
    pinned.takeoff_placement = TakeoffPlacement::Explicit {
        positions: scenario.uavs.iter().map(|u| u.initial_position).collect(),
    };
    for (name, text) in [
        ("scenario.txt", snapshot),
        ("config.toml", pinned.to_toml_string()?),
    ] {
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    }
    println!("wrote scenario.txt and config.toml to {}", dir.display());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            config,
            algorithm,
            out,
            seed,
        } => cmd_run(&config, algorithm, &out, seed)?,
        Command::Sweep {
            family,
            seeds,
            config,
            out,
            seed,
        } => cmd_sweep(family, seeds, &config, &out, seed)?,
        Command::Validate { config } => cmd_validate(&config)?,
        Command::Dump { config, out, seed } => cmd_dump(&config, out.as_deref(), seed)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Guard(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_GUARD)
        }
    }
}
