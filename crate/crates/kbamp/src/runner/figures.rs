//! Plot-ready data emission: decay trajectories with fitted overlays.

use std::path::PathBuf;

use serde::Serialize;

use crate::error::Result;
use crate::fit::{select_n, write_fit_table_csv, write_overlay_csv, NSelection};
use crate::integrate::{integrate_amplitude, OutputGrid};

use super::config::ExperimentConfig;

/// Files written for one figure.
#[derive(Debug, Clone)]
pub struct FigureFiles {
    pub csv: PathBuf,
    pub json: PathBuf,
    pub selection: NSelection,
}

#[derive(Serialize)]
struct FigureSidecar<'a> {
    r0: f64,
    config_hash: String,
    window: [f64; 2],
    best_n: u32,
    tie: bool,
    table: &'a [crate::fit::PowerLawFit],
}

/// Points before the fit window that make the emitted trajectory cover the
/// initial transient as well.
const LEAD_SAMPLES: usize = 256;

fn figure_grid(config: &ExperimentConfig) -> Result<OutputGrid> {
    let parts = config.build_parts()?;
    let mut times = Vec::new();
    let t_start = parts.window.t_start();
    for i in 0..LEAD_SAMPLES {
        times.push(t_start * i as f64 / LEAD_SAMPLES as f64);
    }
    times.extend(parts.settings.grid.times(parts.settings.t_end)?);
    times.dedup_by(|b, a| *b <= *a);
    Ok(OutputGrid::Explicit(times))
}

/// Integrates the decay from `r0`, fits the candidate indices, and writes
/// `fig_r0_<r0>.csv` (`t,r,r_hat`) plus a JSON sidecar with the fit table.
pub fn emit_figure_data(config: &ExperimentConfig, r0: f64) -> Result<FigureFiles> {
    let parts = config.build_parts()?;
    let mut settings = parts.settings.clone();
    settings.grid = figure_grid(config)?;
    let traj = integrate_amplitude(&parts.drift, r0, &settings)?;
    let selection = select_n(&traj, &config.candidates, &parts.window)?;

    let dir = config.resolved_output_dir();
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join(format!("fig_r0_{r0}.csv"));
    let json = dir.join(format!("fig_r0_{r0}.json"));

    let mut csv_buf = Vec::new();
    write_overlay_csv(&traj, &selection.best, &mut csv_buf)?;
    std::fs::write(&csv, csv_buf)?;

    let sidecar = FigureSidecar {
        r0,
        config_hash: config.hash(),
        window: [parts.window.t_start(), parts.window.t_end()],
        best_n: selection.best.n,
        tie: selection.tie,
        table: &selection.table,
    };
    let mut text = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
    text.push('\n');
    std::fs::write(&json, text)?;

    Ok(FigureFiles {
        csv,
        json,
        selection,
    })
}

/// Writes the decay trajectory (`decay_r0_<r0>.csv`) and its candidate fit
/// table (`decay_fits_r0_<r0>.csv`) for a single initial amplitude.
pub fn emit_decay_data(
    config: &ExperimentConfig,
    r0: f64,
) -> Result<(PathBuf, PathBuf, NSelection)> {
    let (traj, selection) = super::sweep::decay_pipeline(config, r0)?;
    let dir = config.resolved_output_dir();
    std::fs::create_dir_all(&dir)?;
    let traj_path = dir.join(format!("decay_r0_{r0}.csv"));
    let fits_path = dir.join(format!("decay_fits_r0_{r0}.csv"));
    let mut buf = Vec::new();
    traj.write_csv(&mut buf)?;
    std::fs::write(&traj_path, buf)?;
    let mut buf = Vec::new();
    write_fit_table_csv(&selection.table, &mut buf)?;
    std::fs::write(&fits_path, buf)?;
    Ok((traj_path, fits_path, selection))
}
