//! Parameter sweeps comparing SC-MDC-TA against the CD baseline.
//!
//! Every variant runs both algorithms on the same generated scenario for
//! each replicate. The scenario seed of a replicate is
//! `base_seed ^ fnv1a64("<family>/<variant>/<replicate>")`, so results do
//! not depend on which other families or variants are run alongside.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::allocator::{run, Algorithm, AllocError};
use crate::report::{
    self, collect_metrics, compare, LongRow, ReportError, RunMetrics, SweepSummary,
};
use crate::scenario::{
    generate_scenario, HoverPolicy, ScenarioConfig, ScenarioError, Side, TakeoffPlacement,
    TaskDistribution,
};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{family}/{variant} seed {seed}")]
    Alloc {
        family: Family,
        variant: String,
        seed: u64,
        #[source]
        source: AllocError,
    },
    #[error(transparent)]
    Report(#[from] ReportError),
    #[error("cannot create {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Hover,
    Takeoff,
    Distribution,
    UavCount,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::Hover,
        Family::Takeoff,
        Family::Distribution,
        Family::UavCount,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::Hover => "hover",
            Family::Takeoff => "takeoff",
            Family::Distribution => "distribution",
            Family::UavCount => "uav_count",
        }
    }

    /// Variant labels and their configurations, derived from `base`.
    pub fn variants(self, base: &ScenarioConfig) -> Vec<Variant> {
        let with = |label: &str, f: &dyn Fn(&mut ScenarioConfig)| {
            let mut config = base.clone();
            f(&mut config);
            Variant {
                label: label.to_owned(),
                config,
            }
        };
        match self {
            Family::Hover => vec![
                with("none", &|c| c.hover_policy = HoverPolicy::None),
                with("0-5s", &|c| {
                    c.hover_policy = HoverPolicy::UniformRange { lo: 0.0, hi: 5.0 }
                }),
                with("10-30s", &|c| {
                    c.hover_policy = HoverPolicy::UniformRange { lo: 10.0, hi: 30.0 }
                }),
            ],
            Family::Takeoff => vec![
                with("center", &|c| {
                    c.takeoff_placement = TakeoffPlacement::Center
                }),
                with("corners", &|c| {
                    c.takeoff_placement = TakeoffPlacement::Corners
                }),
                with("edge", &|c| {
                    c.takeoff_placement = TakeoffPlacement::Edge { side: Side::South }
                }),
            ],
            Family::Distribution => vec![
                with("random", &|c| {
                    c.task_distribution = TaskDistribution::Random
                }),
                with("uniform", &|c| {
                    c.task_distribution = TaskDistribution::Uniform
                }),
                with("clustered", &|c| {
                    c.task_distribution = TaskDistribution::Clustered {
                        k: 4,
                        spread: 150.0,
                    }
                }),
            ],
            Family::UavCount => [2, 3, 4]
                .into_iter()
                .map(|m| with(&m.to_string(), &|c| c.n_uavs = m))
                .collect(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| {
                format!("unknown family '{s}' (expected hover, takeoff, distribution or uav_count)")
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variant {
    pub label: String,
    pub config: ScenarioConfig,
}

pub fn replicate_seed(base: u64, family: Family, variant: &str, replicate: usize) -> u64 {
    let key = format!("{}/{}/{}", family.tag(), variant, replicate);
    base ^ report::fnv1a64(key.as_bytes())
}

/// All runs of one variant, SC and CD paired by seed.
#[derive(Debug, Clone, PartialEq)]
pub struct VariantRuns {
    pub label: String,
    pub sc: Vec<RunMetrics>,
    pub cd: Vec<RunMetrics>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub family: Family,
    pub variants: Vec<VariantRuns>,
    pub summaries: Vec<SweepSummary>,
}

impl SweepOutput {
    pub fn summary(&self, variant: &str) -> Option<&SweepSummary> {
        self.summaries.iter().find(|s| s.variant == variant)
    }

    /// Long-format rows: variant order, then replicate order, SC before CD.
    pub fn long_rows(&self) -> Vec<LongRow> {
        let mut rows = Vec::new();
        for v in &self.variants {
            for (sc, cd) in v.sc.iter().zip(&v.cd) {
                for m in [sc, cd] {
                    rows.push(LongRow {
                        variant: v.label.clone(),
                        algorithm: m.algorithm,
                        seed: m.seed,
                        completion_time_s: m.mean_completion_time,
                        energy_j: m.total_energy,
                    });
                }
            }
        }
        rows
    }

    /// Write `<family>.csv` and `<family>_long.csv` into `dir`.
    pub fn write_tables(&self, dir: &Path) -> Result<(), ExperimentError> {
        let tag = self.family.tag();
        report::write_csv(&dir.join(format!("{tag}.csv")), &self.summaries)?;
        report::write_csv(&dir.join(format!("{tag}_long.csv")), &self.long_rows())?;
        Ok(())
    }
}

/// Run `replicates` paired SC/CD replicates of every variant of `family`.
pub fn run_family(
    family: Family,
    base: &ScenarioConfig,
    replicates: usize,
) -> Result<SweepOutput, ExperimentError> {
    let mut variants = Vec::new();
    let mut summaries = Vec::new();
    for variant in family.variants(base) {
        variant.config.ensure_valid()?;
        let mut runs = VariantRuns {
            label: variant.label.clone(),
            sc: Vec::with_capacity(replicates),
            cd: Vec::with_capacity(replicates),
        };
        for r in 0..replicates {
            let seed = replicate_seed(base.rng_seed, family, &variant.label, r);
            let mut config = variant.config.clone();
            config.rng_seed = seed;
            let scenario = generate_scenario(&config)?;
            let hash = report::scenario_hash(&scenario);
            for alg in [Algorithm::Sc, Algorithm::Cd] {
                let result = run(&scenario, alg).map_err(|source| ExperimentError::Alloc {
                    family,
                    variant: variant.label.clone(),
                    seed,
                    source,
                })?;
                let metrics = collect_metrics(&result, &hash, seed);
                match alg {
                    Algorithm::Sc => runs.sc.push(metrics),
                    Algorithm::Cd => runs.cd.push(metrics),
                }
            }
        }
        summaries.push(compare(family.tag(), &variant.label, &runs.sc, &runs.cd)?);
        variants.push(runs);
    }
    Ok(SweepOutput {
        family,
        variants,
        summaries,
    })
}

/// Run every family, write per-family tables and `summary.json` into `dir`.
pub fn run_all(
    families: &[Family],
    base: &ScenarioConfig,
    replicates: usize,
    dir: &Path,
) -> Result<Vec<SweepOutput>, ExperimentError> {
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut outputs = Vec::new();
    for &family in families {
        let out = run_family(family, base, replicates)?;
        out.write_tables(dir)?;
        outputs.push(out);
    }
    let all: Vec<&SweepSummary> = outputs.iter().flat_map(|o| &o.summaries).collect();
    report::write_json(&dir.join("summary.json"), &all)?;
    Ok(outputs)
}
