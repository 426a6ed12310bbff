//! Power-law decay fitting and exponent-index selection.
//!
//! The decay model is `r_hat(t) = C t^(-1/n)` for a positive integer index
//! `n`. For fixed `n` the least-squares prefactor has the closed form
//! `C = sum(r_i w_i) / sum(w_i^2)` with basis `w_i = t_i^(-1/n)`; the index
//! is then selected by least mean squared error over a candidate set.
//! Two cross-check estimators treat the exponent as continuous: a
//! golden-section search on `p` in `C t^(-p)`, and ordinary least squares
//! on `log r` against `log t`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrate::Trajectory;

/// Minimum number of samples a window must select.
pub const MIN_WINDOW_SAMPLES: usize = 10;

/// Time window `[t_start, t_end]` with `t_start > 0`; the fitted model is
/// singular at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitWindow {
    t_start: f64,
    t_end: f64,
}

impl FitWindow {
    pub fn new(t_start: f64, t_end: f64) -> Result<Self> {
        if !(t_start > 0.0 && t_start.is_finite()) {
            return Err(Error::InvalidInterval(format!(
                "window start must be positive, got {t_start}"
            )));
        }
        if !(t_end > t_start && t_end.is_finite()) {
            return Err(Error::InvalidInterval(format!(
                "window end {t_end} must exceed start {t_start}"
            )));
        }
        Ok(Self { t_start, t_end })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    /// Scales both endpoints, e.g. to track a change in `eps`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.t_start * factor, self.t_end * factor)
    }

    /// Borrows the `(t, r)` samples falling inside the window.
    pub fn select<'t>(&self, traj: &'t Trajectory) -> Result<(&'t [f64], &'t [f64])> {
        let times = traj.times();
        let values = traj.scalar_values()?;
        let lo = times.partition_point(|&t| t < self.t_start);
        let hi = times.partition_point(|&t| t <= self.t_end);
        let n = hi.saturating_sub(lo);
        if n < MIN_WINDOW_SAMPLES {
            return Err(Error::EmptyWindow(format!(
                "window [{}, {}] selects {n} samples, need at least {MIN_WINDOW_SAMPLES}",
                self.t_start, self.t_end
            )));
        }
        Ok((&times[lo..hi], &values[lo..hi]))
    }
}

impl Default for FitWindow {
    /// Decay-fit default: `[1, 500]`.
    fn default() -> Self {
        Self {
            t_start: 1.0,
            t_end: 500.0,
        }
    }
}

/// Result of fitting `C t^(-1/n)` for one fixed index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub n: u32,
    pub prefactor: f64,
    pub mse: f64,
    pub window: FitWindow,
}

impl PowerLawFit {
    pub fn predict(&self, t: f64) -> f64 {
        self.prefactor * t.powf(-1.0 / self.n as f64)
    }
}

/// Index selection outcome: the winning fit plus the whole candidate table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NSelection {
    pub best: PowerLawFit,
    pub table: Vec<PowerLawFit>,
    /// Set when another candidate achieved exactly the minimal MSE; the
    /// smaller index is reported as best.
    pub tie: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorMethod {
    GoldenSection,
    LogLogOls,
}

/// Continuous-exponent estimate of `C t^(-p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub exponent: f64,
    pub prefactor: f64,
    /// Sum of squared errors: linear space for `GoldenSection`, log space
    /// for `LogLogOls`.
    pub sse: f64,
    pub method: EstimatorMethod,
    /// The continuous search ended on a boundary of its `p` range.
    pub on_boundary: bool,
}

fn closed_form_prefactor(times: &[f64], values: &[f64], p: f64) -> Result<(f64, f64)> {
    let mut cross = 0.0;
    let mut basis = 0.0;
    for (&t, &r) in times.iter().zip(values) {
        let w = t.powf(-p);
        cross += r * w;
        basis += w * w;
    }
    if basis == 0.0 || !basis.is_finite() {
        return Err(Error::DegenerateBasis(format!(
            "sum of squared basis values is {basis} at exponent {p}"
        )));
    }
    let c = cross / basis;
    let sse: f64 = times
        .iter()
        .zip(values)
        .map(|(&t, &r)| {
            let e = r - c * t.powf(-p);
            e * e
        })
        .sum();
    Ok((c, sse))
}

/// Least-squares fit of `C t^(-1/n)` over the window for a fixed index.
pub fn fit_fixed_n(traj: &Trajectory, n: u32, window: &FitWindow) -> Result<PowerLawFit> {
    if n == 0 {
        return Err(Error::InvalidParameter("index n must be positive".into()));
    }
    let (times, values) = window.select(traj)?;
    let (prefactor, sse) = closed_form_prefactor(times, values, 1.0 / n as f64)?;
    Ok(PowerLawFit {
        n,
        prefactor,
        mse: sse / times.len() as f64,
        window: *window,
    })
}

/// Fits every candidate index and returns the least-MSE winner along with
/// the full table. Exact MSE ties resolve to the smaller index.
pub fn select_n(traj: &Trajectory, candidates: &[u32], window: &FitWindow) -> Result<NSelection> {
    if candidates.is_empty() {
        return Err(Error::InvalidParameter("empty candidate set".into()));
    }
    let mut sorted: Vec<u32> = candidates.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let table: Vec<PowerLawFit> = sorted
        .iter()
        .map(|&n| fit_fixed_n(traj, n, window))
        .collect::<Result<_>>()?;
    let mut best = table[0].clone();
    let mut tie = false;
    for fit in &table[1..] {
        if fit.mse < best.mse {
            best = fit.clone();
            tie = false;
        } else if fit.mse == best.mse {
            tie = true;
        }
    }
    Ok(NSelection { best, table, tie })
}

const GOLDEN_RATIO_CONJUGATE: f64 = 0.618_033_988_749_894_9;
const GOLDEN_BRACKET_TOL: f64 = 1e-6;

/// Golden-section search for the continuous exponent minimizing the sum of
/// squared errors, with the prefactor eliminated in closed form at each
/// probe. Assumes a unimodal objective on `p_range`.
pub fn fit_continuous(
    traj: &Trajectory,
    window: &FitWindow,
    p_range: (f64, f64),
) -> Result<ExponentEstimate> {
    let (p_lo, p_hi) = p_range;
    if !(p_lo > 0.0 && p_hi > p_lo && p_hi <= 2.0) {
        return Err(Error::InvalidParameter(format!(
            "exponent range ({p_lo}, {p_hi}) must satisfy 0 < lo < hi <= 2"
        )));
    }
    let (times, values) = window.select(traj)?;
    let objective = |p: f64| -> Result<f64> {
        Ok(closed_form_prefactor(times, values, p)?.1)
    };

    let mut a = p_lo;
    let mut b = p_hi;
    let mut x1 = b - GOLDEN_RATIO_CONJUGATE * (b - a);
    let mut x2 = a + GOLDEN_RATIO_CONJUGATE * (b - a);
    let mut f1 = objective(x1)?;
    let mut f2 = objective(x2)?;
    while b - a > GOLDEN_BRACKET_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN_RATIO_CONJUGATE * (b - a);
            f1 = objective(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN_RATIO_CONJUGATE * (b - a);
            f2 = objective(x2)?;
        }
    }
    let p = 0.5 * (a + b);
    let (prefactor, sse) = closed_form_prefactor(times, values, p)?;
    let on_boundary =
        (p - p_lo).abs() <= 2.0 * GOLDEN_BRACKET_TOL || (p_hi - p).abs() <= 2.0 * GOLDEN_BRACKET_TOL;
    Ok(ExponentEstimate {
        exponent: p,
        prefactor,
        sse,
        method: EstimatorMethod::GoldenSection,
        on_boundary,
    })
}

/// Ordinary least squares of `log r` on `log t`; the slope is `-p` and the
/// intercept is `log C`. Requires strictly positive samples.
pub fn fit_loglog(traj: &Trajectory, window: &FitWindow) -> Result<ExponentEstimate> {
    let (times, values) = window.select(traj)?;
    if let Some(bad) = values.iter().find(|v| **v <= 0.0 || v.is_nan()) {
        return Err(Error::NonpositiveSample(format!(
            "sample {bad} is not positive"
        )));
    }
    let n = times.len() as f64;
    let logs: Vec<(f64, f64)> = times
        .iter()
        .zip(values)
        .map(|(&t, &r)| (t.ln(), r.ln()))
        .collect();
    let mean_x = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in &logs {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateBasis(
            "all window times coincide in log space".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = logs
        .iter()
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    Ok(ExponentEstimate {
        exponent: -slope,
        prefactor: intercept.exp(),
        sse,
        method: EstimatorMethod::LogLogOls,
        on_boundary: false,
    })
}

/// Writes the candidate table as `n,C,mse` CSV.
pub fn write_fit_table_csv<W: std::io::Write>(fits: &[PowerLawFit], mut out: W) -> Result<()> {
    writeln!(out, "n,C,mse")?;
    for fit in fits {
        writeln!(out, "{},{:.16e},{:.16e}", fit.n, fit.prefactor, fit.mse)?;
    }
    Ok(())
}

/// Writes a `t,r,r_hat` overlay CSV for plotting a trajectory against its
/// fitted curve. `r_hat` is left blank outside the fit window, where the
/// fitted model was not constrained.
pub fn write_overlay_csv<W: std::io::Write>(
    traj: &Trajectory,
    fit: &PowerLawFit,
    mut out: W,
) -> Result<()> {
    let values = traj.scalar_values()?;
    writeln!(out, "t,r,r_hat")?;
    for (&t, &r) in traj.times().iter().zip(values) {
        if t >= fit.window.t_start() && t <= fit.window.t_end() {
            writeln!(out, "{t:.16e},{r:.16e},{:.16e}", fit.predict(t))?;
        } else {
            writeln!(out, "{t:.16e},{r:.16e},")?;
        }
    }
    Ok(())
}
