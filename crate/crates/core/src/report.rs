//! Run metrics, paired SC-vs-CD comparison, and table/JSON output.
//!
//! Output files and their fixed column order:
//!
//! | file                  | columns |
//! |-----------------------|---------|
//! | `<family>.csv`        | [`SweepSummary`] fields in declaration order |
//! | `<family>_long.csv`   | `variant,algorithm,seed,completion_time_s,energy_J` |
//! | `summary.json`        | array of [`SweepSummary`] |
//! | `legs_<alg>.csv`      | [`Assignment`] fields in declaration order |
//! | `returns_<alg>.csv`   | [`ReturnLeg`] fields in declaration order |
//! | `metrics_<alg>.json`  | [`RunMetrics`] |
//!
//! CSV files are UTF-8 with a header row and `.` as the decimal separator.
//! Floats are written in shortest round-trip form, so parsing a file back
//! yields bit-identical values.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocator::{Algorithm, AllocationResult, Assignment, ReturnLeg};
use crate::scenario::Scenario;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("I/O error on {path}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV in {path}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
    #[error("malformed JSON in {path}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("unpaired runs: SC seeds {sc:?} vs CD seeds {cd:?}")]
    Pairing { sc: Vec<u64>, cd: Vec<u64> },
    #[error("no runs to compare")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub algorithm: Algorithm,
    pub scenario_hash: String,
    pub seed: u64,
    pub completion_times: Vec<f64>,
    pub energies: Vec<f64>,
    pub mean_completion_time: f64,
    pub total_energy: f64,
    pub max_completion_time: f64,
    pub unserved: usize,
}

/// FNV-1a, 64 bit. Stable across platforms and releases.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Hash of the scenario snapshot, hex encoded.
pub fn scenario_hash(scenario: &Scenario) -> String {
    format!("{:016x}", fnv1a64(scenario.to_snapshot().as_bytes()))
}

pub fn collect_metrics(result: &AllocationResult, scenario_hash: &str, seed: u64) -> RunMetrics {
    RunMetrics {
        algorithm: result.algorithm,
        scenario_hash: scenario_hash.to_owned(),
        seed,
        completion_times: result.completion_times.clone(),
        energies: result.energies.clone(),
        mean_completion_time: result.objective,
        total_energy: result.energies.iter().sum(),
        max_completion_time: result.completion_times.iter().copied().fold(0.0, f64::max),
        unserved: result.unserved_tasks.len(),
    }
}

/// Paired comparison of one sweep variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub family: String,
    pub variant: String,
    pub seeds: usize,
    pub sc_time_mean_s: f64,
    pub sc_time_std_s: f64,
    pub cd_time_mean_s: f64,
    pub cd_time_std_s: f64,
    pub sc_energy_mean_j: f64,
    pub sc_energy_std_j: f64,
    pub cd_energy_mean_j: f64,
    pub cd_energy_std_j: f64,
    /// `(CD - SC) / CD` on the sweep means, percent.
    pub time_improvement_pct: f64,
    pub energy_improvement_pct: f64,
    /// Same ratio averaged over seeds instead.
    pub time_improvement_per_seed_pct: f64,
    pub energy_improvement_per_seed_pct: f64,
    pub sc_unserved_mean: f64,
    pub cd_unserved_mean: f64,
}

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn improvement_pct(baseline: f64, candidate: f64) -> f64 {
    (baseline - candidate) / baseline * 100.0
}

/// Compare paired SC and CD runs. Both slices must cover the same seeds.
pub fn compare(
    family: &str,
    variant: &str,
    sc: &[RunMetrics],
    cd: &[RunMetrics],
) -> Result<SweepSummary, ReportError> {
    if sc.is_empty() || cd.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut sc: Vec<&RunMetrics> = sc.iter().collect();
    let mut cd: Vec<&RunMetrics> = cd.iter().collect();
    sc.sort_by_key(|r| r.seed);
    cd.sort_by_key(|r| r.seed);
    let sc_seeds: Vec<u64> = sc.iter().map(|r| r.seed).collect();
    let cd_seeds: Vec<u64> = cd.iter().map(|r| r.seed).collect();
    if sc_seeds != cd_seeds {
        return Err(ReportError::Pairing {
            sc: sc_seeds,
            cd: cd_seeds,
        });
    }

    let col = |runs: &[&RunMetrics], f: fn(&RunMetrics) -> f64| -> Vec<f64> {
        runs.iter().map(|r| f(r)).collect()
    };
    let sc_t = col(&sc, |r| r.mean_completion_time);
    let cd_t = col(&cd, |r| r.mean_completion_time);
    let sc_e = col(&sc, |r| r.total_energy);
    let cd_e = col(&cd, |r| r.total_energy);
    let (sc_tm, sc_ts) = mean_std(&sc_t);
    let (cd_tm, cd_ts) = mean_std(&cd_t);
    let (sc_em, sc_es) = mean_std(&sc_e);
    let (cd_em, cd_es) = mean_std(&cd_e);
    let per_seed = |base: &[f64], cand: &[f64]| {
        let v: Vec<f64> = base
            .iter()
            .zip(cand)
            .map(|(&b, &c)| improvement_pct(b, c))
            .collect();
        mean_std(&v).0
    };
    let unserved = |runs: &[&RunMetrics]| {
        runs.iter().map(|r| r.unserved as f64).sum::<f64>() / runs.len() as f64
    };

    Ok(SweepSummary {
        family: family.to_owned(),
        variant: variant.to_owned(),
        seeds: sc.len(),
        sc_time_mean_s: sc_tm,
        sc_time_std_s: sc_ts,
        cd_time_mean_s: cd_tm,
        cd_time_std_s: cd_ts,
        sc_energy_mean_j: sc_em,
        sc_energy_std_j: sc_es,
        cd_energy_mean_j: cd_em,
        cd_energy_std_j: cd_es,
        time_improvement_pct: improvement_pct(cd_tm, sc_tm),
        energy_improvement_pct: improvement_pct(cd_em, sc_em),
        time_improvement_per_seed_pct: per_seed(&cd_t, &sc_t),
        energy_improvement_per_seed_pct: per_seed(&cd_e, &sc_e),
        sc_unserved_mean: unserved(&sc),
        cd_unserved_mean: unserved(&cd),
    })
}

/// One row of the plot-ready long table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongRow {
    pub variant: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub completion_time_s: f64,
    #[serde(rename = "energy_J")]
    pub energy_j: f64,
}

pub const LONG_COLUMNS: [&str; 5] = [
    "variant",
    "algorithm",
    "seed",
    "completion_time_s",
    "energy_J",
];

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

/// Write `rows` as CSV with a header derived from `T`'s field order.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), ReportError> {
    let csv_err = |source| ReportError::Csv {
        path: path_str(path),
        source,
    };
    let file = File::create(path).map_err(|source| ReportError::Io {
        path: path_str(path),
        source,
    })?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(|source| ReportError::Io {
        path: path_str(path),
        source,
    })
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, ReportError> {
    let mut r = csv::Reader::from_path(path).map_err(|source| ReportError::Csv {
        path: path_str(path),
        source,
    })?;
    r.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(|source| ReportError::Csv {
            path: path_str(path),
            source,
        })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<(), ReportError> {
    let file = File::create(path).map_err(|source| ReportError::Io {
        path: path_str(path),
        source,
    })?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|source| ReportError::Json {
        path: path_str(path),
        source,
    })?;
    use std::io::Write;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(|source| ReportError::Io {
            path: path_str(path),
            source,
        })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReportError::Io {
        path: path_str(path),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReportError::Json {
        path: path_str(path),
        source,
    })
}

pub fn write_legs(path: &Path, legs: &[Assignment]) -> Result<(), ReportError> {
    write_csv(path, legs)
}

pub fn read_legs(path: &Path) -> Result<Vec<Assignment>, ReportError> {
    read_csv(path)
}

pub fn write_returns(path: &Path, returns: &[ReturnLeg]) -> Result<(), ReportError> {
    write_csv(path, returns)
}

pub fn read_returns(path: &Path) -> Result<Vec<ReturnLeg>, ReportError> {
    read_csv(path)
}
