//! Seeded random-IC sweeps: integrate, fit, aggregate.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{select_n, NSelection};
use crate::integrate::integrate_amplitude;

use super::config::ExperimentConfig;

/// Draws `count` independent amplitudes uniformly from the open interval.
/// The stream is fully determined by `(interval, count, seed)`.
pub fn sample_ics(interval: (f64, f64), count: usize, seed: u64) -> Result<Vec<f64>> {
    let (low, high) = interval;
    if !(low.is_finite() && high.is_finite() && low < high) {
        return Err(Error::InvalidInterval(format!(
            "expected low < high, got ({low}, {high})"
        )));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| loop {
            let v = rng.random_range(low..high);
            if v > low {
                break v;
            }
        })
        .collect())
}

/// One candidate row of a per-IC fit table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub n: u32,
    pub prefactor: f64,
    pub mse: f64,
}

/// Outcome for a single initial amplitude. A failed integration leaves the
/// fit fields empty and records the error text instead of aborting the
/// sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcRecord {
    pub index: usize,
    pub r0: f64,
    pub best_n: Option<u32>,
    pub prefactor: Option<f64>,
    pub mse: Option<f64>,
    pub table: Vec<FitRow>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAggregate {
    /// Count of successful ICs per winning index.
    pub histogram: BTreeMap<u32, usize>,
    /// Most frequent winning index (smallest on ties).
    pub modal_n: Option<u32>,
    /// Fraction of successful ICs selecting the modal index.
    pub modal_fraction: f64,
    pub successes: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub provenance: Provenance,
    pub aggregate: SweepAggregate,
    pub records: Vec<IcRecord>,
}

impl SweepReport {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// Flat per-IC summary: `index,r0,best_n,C,mse,error`.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("index,r0,best_n,C,mse,error\n");
        for rec in &self.records {
            let best_n = rec.best_n.map(|n| n.to_string()).unwrap_or_default();
            let c = rec
                .prefactor
                .map(|v| format!("{v:.16e}"))
                .unwrap_or_default();
            let mse = rec.mse.map(|v| format!("{v:.16e}")).unwrap_or_default();
            let error = rec.error.clone().unwrap_or_default().replace(',', ";");
            out.push_str(&format!(
                "{},{:.16e},{},{},{},{}\n",
                rec.index, rec.r0, best_n, c, mse, error
            ));
        }
        out
    }

    /// Writes `sweep_report.json` and `sweep_records.csv` under `dir`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        std::fs::create_dir_all(dir)?;
        let json_path = dir.join("sweep_report.json");
        let csv_path = dir.join("sweep_records.csv");
        std::fs::write(&json_path, self.to_json())?;
        std::fs::write(&csv_path, self.records_csv())?;
        Ok((json_path, csv_path))
    }
}

/// Integrates one initial amplitude on the configured grid and selects the
/// exponent index.
pub fn decay_pipeline(
    config: &ExperimentConfig,
    r0: f64,
) -> Result<(crate::integrate::Trajectory, NSelection)> {
    let parts = config.build_parts()?;
    let traj = integrate_amplitude(&parts.drift, r0, &parts.settings)?;
    let selection = select_n(&traj, &config.candidates, &parts.window)?;
    Ok((traj, selection))
}

/// Runs the full sweep. Initial amplitudes are drawn sequentially up front
/// and results are keyed by index, so the report is identical whatever the
/// worker count of the ambient thread pool.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    let parts = config.build_parts()?;
    let ics = sample_ics(config.ic_interval, config.ic_count, config.seed)?;

    let records: Vec<IcRecord> = ics
        .par_iter()
        .enumerate()
        .map(|(index, &r0)| {
            let outcome = integrate_amplitude(&parts.drift, r0, &parts.settings)
                .and_then(|traj| select_n(&traj, &config.candidates, &parts.window));
            match outcome {
                Ok(selection) => IcRecord {
                    index,
                    r0,
                    best_n: Some(selection.best.n),
                    prefactor: Some(selection.best.prefactor),
                    mse: Some(selection.best.mse),
                    table: selection
                        .table
                        .iter()
                        .map(|f| FitRow {
                            n: f.n,
                            prefactor: f.prefactor,
                            mse: f.mse,
                        })
                        .collect(),
                    error: None,
                },
                Err(e) => IcRecord {
                    index,
                    r0,
                    best_n: None,
                    prefactor: None,
                    mse: None,
                    table: Vec::new(),
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let mut histogram = BTreeMap::new();
    let mut failures = 0usize;
    for rec in &records {
        match rec.best_n {
            Some(n) => *histogram.entry(n).or_insert(0) += 1,
            None => failures += 1,
        }
    }
    let successes = records.len() - failures;
    // BTreeMap iterates ascending, so ties resolve to the smaller index.
    let modal_n = histogram
        .iter()
        .max_by_key(|(_, &count)| count)
        .map(|(&n, _)| n);
    let modal_fraction = modal_n
        .map(|n| histogram[&n] as f64 / successes.max(1) as f64)
        .unwrap_or(0.0);

    Ok(SweepReport {
        provenance: Provenance {
            config_hash: config.hash(),
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
        aggregate: SweepAggregate {
            histogram,
            modal_n,
            modal_fraction,
            successes,
            failures,
        },
        records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::runner::config::preset;

    #[test]
    fn sampling_is_deterministic_and_inside_interval() {
        let a = sample_ics((2.4, 4.91), 1000, 42).unwrap();
        let b = sample_ics((2.4, 4.91), 1000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1000);
        assert!(a.iter().all(|&r| r > 2.4 && r < 4.91));
        let c = sample_ics((2.4, 4.91), 1000, 43).unwrap();
        assert_ne!(a, c);
        let single = sample_ics((1.5, 2.6), 1, 7).unwrap();
        assert!(single[0] > 1.5 && single[0] < 2.6);
    }

    #[test]
    fn invalid_interval_is_rejected() {
        assert!(matches!(
            sample_ics((3.0, 2.0), 10, 0),
            Err(Error::InvalidInterval(_))
        ));
        assert!(sample_ics((f64::NAN, 2.0), 10, 0).is_err());
    }

    #[test]
    fn small_sweep_reports_consistent_counts() {
        let mut config = preset("vdp-bi").unwrap();
        config.ic_count = 24;
        let report = run_sweep(&config).unwrap();
        assert_eq!(report.records.len(), 24);
        let total: usize = report.aggregate.histogram.values().sum();
        assert_eq!(total + report.aggregate.failures, 24);
        assert_eq!(report.aggregate.successes, total);
        assert_eq!(report.provenance.seed, 42);
        for (i, rec) in report.records.iter().enumerate() {
            assert_eq!(rec.index, i);
            assert_eq!(rec.table.len(), 6);
        }
    }

    #[test]
    fn failed_ics_are_recorded_not_fatal() {
        let mut config = preset("vdp-bi").unwrap();
        config.ic_count = 5;
        // An absurdly small radius guard makes every integration diverge.
        config.integrator.r_max = Some(1e-3);
        let report = run_sweep(&config).unwrap();
        assert_eq!(report.aggregate.failures, 5);
        assert_eq!(report.aggregate.modal_n, None);
        assert!(report.records.iter().all(|r| r.error.is_some()));
    }

    #[test]
    fn figure_amplitudes_all_select_index_three() {
        for name in crate::runner::config::PRESET_NAMES {
            let mut config = preset(name).unwrap();
            config.integrator.samples = 800;
            for r0 in config.figure_initial_amplitudes() {
                let (_, selection) = decay_pipeline(&config, r0).unwrap();
                assert_eq!(selection.best.n, 3, "{name} r0={r0}");
            }
        }
    }

    #[test]
    fn report_identical_across_thread_counts() {
        let mut config = preset("rayleigh-bi").unwrap();
        config.ic_count = 16;
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&config))
            .unwrap();
        let multi = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_sweep(&config))
            .unwrap();
        assert_eq!(single.to_json(), multi.to_json());
        assert_eq!(single.records_csv(), multi.records_csv());
    }
}
