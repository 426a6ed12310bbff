//! Adaptive integration of the averaged amplitude ODE and of the full
//! planar oscillator.
//!
//! The stepper is the Dormand-Prince 5(4) embedded pair with the standard
//! fourth-order dense-output interpolant, so requested output times are
//! filled from the continuous extension rather than by forcing step
//! endpoints. Local error per step is controlled to `atol + rtol * |y|`.

use serde::{Deserialize, Serialize};

use crate::averaging::RadialDrift;
use crate::cycles;
use crate::error::{Error, Result};
use crate::model::{DampingClass, OscillatorModel};

/// How output samples are distributed over time.
///
/// `SqrtWarped` concentrates samples at early times (`t = t_start +
/// (t_end - t_start) s^2` on a uniform `s` grid): decades of a power-law
/// tail then carry comparable sample weight in an unweighted fit, which a
/// uniform grid does not provide.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum OutputGrid {
    /// `samples` points uniformly spaced on `[0, t_end]`.
    Uniform { samples: usize },
    /// `samples` points on `[t_start, t_end]`, quadratically warped
    /// toward `t_start`.
    SqrtWarped { t_start: f64, samples: usize },
    /// `samples` points geometrically spaced on `[t_start, t_end]`,
    /// `t_start > 0`.
    LogSpaced { t_start: f64, samples: usize },
    /// Explicit strictly increasing times in `[0, t_end]`.
    Explicit(Vec<f64>),
}

impl OutputGrid {
    /// Materializes the grid for a given final time.
    pub fn times(&self, t_end: f64) -> Result<Vec<f64>> {
        let check_span = |t_start: f64, samples: usize| -> Result<()> {
            if !(t_start >= 0.0 && t_start < t_end) {
                return Err(Error::InvalidParameter(format!(
                    "grid start {t_start} must lie in [0, t_end = {t_end})"
                )));
            }
            if samples < 2 {
                return Err(Error::InvalidParameter(
                    "output grid needs at least 2 samples".into(),
                ));
            }
            Ok(())
        };
        match self {
            OutputGrid::Uniform { samples } => {
                check_span(0.0, *samples)?;
                let n = *samples;
                Ok((0..n)
                    .map(|i| t_end * i as f64 / (n - 1) as f64)
                    .collect())
            }
            OutputGrid::SqrtWarped { t_start, samples } => {
                check_span(*t_start, *samples)?;
                let n = *samples;
                Ok((0..n)
                    .map(|i| {
                        let s = i as f64 / (n - 1) as f64;
                        t_start + (t_end - t_start) * s * s
                    })
                    .collect())
            }
            OutputGrid::LogSpaced { t_start, samples } => {
                check_span(*t_start, *samples)?;
                if *t_start <= 0.0 {
                    return Err(Error::InvalidParameter(
                        "log-spaced grid requires t_start > 0".into(),
                    ));
                }
                let n = *samples;
                let ratio = (t_end / t_start).ln();
                Ok((0..n)
                    .map(|i| t_start * (ratio * i as f64 / (n - 1) as f64).exp())
                    .collect())
            }
            OutputGrid::Explicit(times) => {
                if times.is_empty() {
                    return Err(Error::InvalidParameter("empty output grid".into()));
                }
                for pair in times.windows(2) {
                    if pair[1] <= pair[0] || pair[1].is_nan() || pair[0].is_nan() {
                        return Err(Error::InvalidParameter(
                            "explicit grid times must be strictly increasing".into(),
                        ));
                    }
                }
                if times[0] < 0.0 || *times.last().unwrap() > t_end {
                    return Err(Error::InvalidParameter(
                        "explicit grid times must lie in [0, t_end]".into(),
                    ));
                }
                Ok(times.clone())
            }
        }
    }
}

/// Tolerances, horizon and guards for one integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub rtol: f64,
    pub atol: f64,
    pub t_end: f64,
    pub grid: OutputGrid,
    /// Divergence guard; `None` selects `10 * max(r0, largest drift root, 1)`.
    pub r_max: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            t_end: 500.0,
            grid: OutputGrid::Uniform { samples: 2000 },
            r_max: None,
            max_steps: 10_000_000,
        }
    }
}

impl IntegratorSettings {
    fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive: rtol={}, atol={}",
                self.rtol, self.atol
            )));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be positive and finite, got {}",
                self.t_end
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }
}

/// Sampled solution: either the scalar amplitude `r(t)` or the planar
/// state `(x, x')(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TrajectoryValues {
    Scalar(Vec<f64>),
    Planar(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub rtol: f64,
    pub atol: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    times: Vec<f64>,
    values: TrajectoryValues,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    /// Builds a scalar trajectory, checking the grid and sign invariants.
    pub fn from_scalar_samples(
        times: Vec<f64>,
        values: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::InvalidParameter(format!(
                "times ({}) and values ({}) differ in length",
                times.len(),
                values.len()
            )));
        }
        if times.windows(2).any(|w| w[1] <= w[0] || w[1].is_nan() || w[0].is_nan()) {
            return Err(Error::InvalidParameter(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| *v < 0.0 || v.is_nan()) {
            return Err(Error::InvalidParameter(
                "scalar trajectory values must be nonnegative".into(),
            ));
        }
        Ok(Self {
            times,
            values: TrajectoryValues::Scalar(values),
            meta: TrajectoryMeta {
                rtol: 0.0,
                atol: 0.0,
                label: label.into(),
            },
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &TrajectoryValues {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        matches!(self.values, TrajectoryValues::Scalar(_))
    }

    /// Amplitude samples; `ModeMismatch` on a planar trajectory.
    pub fn scalar_values(&self) -> Result<&[f64]> {
        match &self.values {
            TrajectoryValues::Scalar(v) => Ok(v),
            TrajectoryValues::Planar(_) => Err(Error::ModeMismatch(
                "expected scalar amplitude trajectory, got planar state".into(),
            )),
        }
    }

    /// State samples; `ModeMismatch` on a scalar trajectory.
    pub fn planar_values(&self) -> Result<&[[f64; 2]]> {
        match &self.values {
            TrajectoryValues::Planar(v) => Ok(v),
            TrajectoryValues::Scalar(_) => Err(Error::ModeMismatch(
                "expected planar state trajectory, got scalar amplitude".into(),
            )),
        }
    }

    /// Writes `t,r` (scalar) or `t,x,v` (planar) CSV with 17 significant
    /// digits.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> Result<()> {
        match &self.values {
            TrajectoryValues::Scalar(v) => {
                writeln!(out, "t,r")?;
                for (t, r) in self.times.iter().zip(v) {
                    writeln!(out, "{t:.16e},{r:.16e}")?;
                }
            }
            TrajectoryValues::Planar(v) => {
                writeln!(out, "t,x,v")?;
                for (t, s) in self.times.iter().zip(v) {
                    writeln!(out, "{t:.16e},{:.16e},{:.16e}", s[0], s[1])?;
                }
            }
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Error weights: 5th-order minus embedded 4th-order solution.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// Dense-output weights for the fifth interpolation coefficient.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_SCALE: f64 = 0.2;
const MAX_SCALE: f64 = 10.0;

struct DenseSegment<const N: usize> {
    t0: f64,
    h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseSegment<N> {
    fn eval(&self, t: f64) -> [f64; N] {
        let s = (t - self.t0) / self.h;
        let s1 = 1.0 - s;
        let mut y = [0.0; N];
        for i in 0..N {
            let c = &self.cont;
            y[i] = c[0][i] + s * (c[1][i] + s1 * (c[2][i] + s * (c[3][i] + s1 * c[4][i])));
        }
        y
    }
}

fn rms_norm<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    let sum: f64 = v
        .iter()
        .zip(scale)
        .map(|(e, s)| (e / s) * (e / s))
        .sum();
    (sum / N as f64).sqrt()
}

/// Classic starting-step heuristic from the explicit Runge-Kutta
/// literature: balance the first derivative against an Euler probe.
fn initial_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: &[f64; N],
    f0: &[f64; N],
    t_end: f64,
    rtol: f64,
    atol: f64,
) -> f64 {
    let mut scale = [0.0; N];
    for i in 0..N {
        scale[i] = atol + rtol * y0[i].abs();
    }
    let d0 = rms_norm(y0, &scale);
    let d1 = rms_norm(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y0[i] + h0 * f0[i];
    }
    let f1 = f(h0, &y1);
    let mut df = [0.0; N];
    for i in 0..N {
        df[i] = f1[i] - f0[i];
    }
    let d2 = rms_norm(&df, &scale) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(t_end)
}

/// Integrates `y' = f(t, y)` from `t = 0` to `t_end`, returning values on
/// `out_times` via dense output. `radius` maps the state to the guarded
/// amplitude compared against `r_max`.
#[allow(clippy::too_many_arguments)]
fn solve_dopri5<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    rtol: f64,
    atol: f64,
    t_end: f64,
    max_steps: usize,
    radius: impl Fn(&[f64; N]) -> f64,
    r_max: f64,
    out_times: &[f64],
) -> Result<Vec<[f64; N]>> {
    let mut outputs = Vec::with_capacity(out_times.len());
    let mut next_out = 0;
    while next_out < out_times.len() && out_times[next_out] <= 0.0 {
        outputs.push(y0);
        next_out += 1;
    }

    let mut t = 0.0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&f, &y, &k1, t_end, rtol, atol);
    let mut steps = 0;
    let mut rejected = false;

    while t < t_end {
        if steps >= max_steps {
            return Err(Error::Divergence {
                t,
                reason: format!("step budget of {max_steps} exhausted"),
            });
        }
        steps += 1;
        h = h.min(t_end - t);

        let stage = |coeffs: &[(f64, &[f64; N])]| {
            let mut ys = y;
            for (a, k) in coeffs {
                for i in 0..N {
                    ys[i] += h * a * k[i];
                }
            }
            ys
        };
        let k2 = f(t + C2 * h, &stage(&[(A21, &k1)]));
        let k3 = f(t + C3 * h, &stage(&[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * h, &stage(&[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(
            t + C5 * h,
            &stage(&[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = f(
            t + h,
            &stage(&[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        );
        let mut y_next = y;
        for i in 0..N {
            y_next[i] +=
                h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let k7 = f(t + h, &y_next);

        let mut err = [0.0; N];
        let mut scale = [0.0; N];
        for i in 0..N {
            err[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                    + E7 * k7[i]);
            scale[i] = atol + rtol * y[i].abs().max(y_next[i].abs());
        }
        let err_norm = rms_norm(&err, &scale);

        if !err_norm.is_finite() {
            return Err(Error::Divergence {
                t,
                reason: "non-finite error estimate".into(),
            });
        }

        if err_norm <= 1.0 {
            // Accepted: build the dense segment and drain due outputs.
            let mut cont = [[0.0; N]; 5];
            for i in 0..N {
                let dy = y_next[i] - y[i];
                let bspl = h * k1[i] - dy;
                cont[0][i] = y[i];
                cont[1][i] = dy;
                cont[2][i] = bspl;
                cont[3][i] = dy - h * k7[i] - bspl;
                cont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i]
                        + D7 * k7[i]);
            }
            let segment = DenseSegment { t0: t, h, cont };
            let t_new = t + h;
            while next_out < out_times.len() && out_times[next_out] <= t_new {
                let ty = if out_times[next_out] == t_new {
                    y_next
                } else {
                    segment.eval(out_times[next_out])
                };
                outputs.push(ty);
                next_out += 1;
            }

            t = t_new;
            y = y_next;
            k1 = k7; // first-same-as-last

            let r = radius(&y);
            if !r.is_finite() || r > r_max {
                return Err(Error::Divergence {
                    t,
                    reason: format!("radius {r} exceeded guard {r_max}"),
                });
            }

            let scale_factor = if err_norm == 0.0 {
                MAX_SCALE
            } else {
                (SAFETY * err_norm.powf(-0.2)).clamp(MIN_SCALE, MAX_SCALE)
            };
            // After a rejection, do not let the step grow immediately.
            h *= if rejected {
                scale_factor.min(1.0)
            } else {
                scale_factor
            };
            rejected = false;
        } else {
            rejected = true;
            h *= (SAFETY * err_norm.powf(-0.2)).clamp(MIN_SCALE, 1.0);
            if h <= 0.0 || h.is_nan() || t + h == t {
                return Err(Error::Divergence {
                    t,
                    reason: "step size underflow".into(),
                });
            }
        }
    }
    // Outputs exactly at t_end that were not drained by the final step.
    while next_out < out_times.len() {
        outputs.push(y);
        next_out += 1;
    }
    Ok(outputs)
}

/// Default divergence guard.
fn default_r_max(r_start: f64, drift: &RadialDrift) -> f64 {
    let largest_root = cycles::find_cycles(drift)
        .ok()
        .and_then(|set| set.roots.last().map(|r| r.amplitude))
        .unwrap_or(0.0);
    10.0 * r_start.max(largest_root).max(1.0)
}

/// Integrates the averaged amplitude equation `dr/dt = eps r q(r^2)` from
/// `r(0) = r0`, sampling on the settings' output grid.
pub fn integrate_amplitude(
    drift: &RadialDrift,
    r0: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    settings.validate()?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "initial amplitude must be positive, got {r0}"
        )));
    }
    let out_times = settings.grid.times(settings.t_end)?;
    let r_max = settings.r_max.unwrap_or_else(|| default_r_max(r0, drift));
    let q = drift.radial_polynomial();
    let eps = drift.epsilon();
    let f = move |_t: f64, y: &[f64; 1]| {
        let r = y[0];
        let u = r * r;
        let mut acc = 0.0;
        for &c in q.iter().rev() {
            acc = acc * u + c;
        }
        [eps * r * acc]
    };
    let states = solve_dopri5(
        f,
        [r0],
        settings.rtol,
        settings.atol,
        settings.t_end,
        settings.max_steps,
        |y| y[0].abs(),
        r_max,
        &out_times,
    )?;
    let values = states.iter().map(|s| s[0].max(0.0)).collect();
    let mut traj = Trajectory::from_scalar_samples(out_times, values, "amplitude")?;
    traj.meta.rtol = settings.rtol;
    traj.meta.atol = settings.atol;
    Ok(traj)
}

/// Closed-form amplitude decay of the post-transition monorhythmic case:
/// `dr/dt = -eps r^3 / 8` integrates to `r(t) = 2 / sqrt(4/r0^2 + eps t)`.
pub fn exact_monorhythmic(r0: f64, epsilon: f64, t: f64) -> Result<f64> {
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "initial amplitude must be positive, got {r0}"
        )));
    }
    if t < 0.0 || t.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    Ok(2.0 / (4.0 / (r0 * r0) + epsilon * t).sqrt())
}

/// Integrates the full second-order oscillator as the planar system
/// `x' = v`, `v' = -omega^2 x - eps g(s) v`.
pub fn integrate_full(
    model: &OscillatorModel,
    x0: f64,
    v0: f64,
    settings: &IntegratorSettings,
) -> Result<Trajectory> {
    settings.validate()?;
    if x0 == 0.0 && v0 == 0.0 {
        return Err(Error::InvalidParameter(
            "initial state must differ from the fixed point at the origin".into(),
        ));
    }
    if !(x0.is_finite() && v0.is_finite()) {
        return Err(Error::InvalidParameter("non-finite initial state".into()));
    }
    let out_times = settings.grid.times(settings.t_end)?;
    let omega = model.omega();
    let omega_sq = omega * omega;
    let eps = model.epsilon();
    let coeffs: Vec<f64> = model
        .coeffs()
        .iter()
        .map(crate::rational::rational_to_f64)
        .collect();
    let velocity_class = model.class() == DampingClass::VelocityPolynomial;
    let f = move |_t: f64, y: &[f64; 2]| {
        let (x, v) = (y[0], y[1]);
        let s = if velocity_class { v } else { x };
        let u = s * s;
        let mut g = 0.0;
        for &c in coeffs.iter().rev() {
            g = g * u + c;
        }
        [v, -omega_sq * x - eps * g * v]
    };
    let radius = move |y: &[f64; 2]| (y[0] * y[0] + y[1] * y[1] / omega_sq).sqrt();
    let r_start = radius(&[x0, v0]);
    let r_max = match settings.r_max {
        Some(r) => r,
        None => {
            let drift = crate::averaging::average(model)?;
            if drift.is_zero() {
                10.0 * r_start.max(1.0)
            } else {
                default_r_max(r_start, &drift)
            }
        }
    };
    let states = solve_dopri5(
        f,
        [x0, v0],
        settings.rtol,
        settings.atol,
        settings.t_end,
        settings.max_steps,
        radius,
        r_max,
        &out_times,
    )?;
    Ok(Trajectory {
        times: out_times,
        values: TrajectoryValues::Planar(states),
        meta: TrajectoryMeta {
            rtol: settings.rtol,
            atol: settings.atol,
            label: "full oscillator".into(),
        },
    })
}

/// Pointwise amplitude envelope `r = sqrt(x^2 + v^2 / omega^2)` of a
/// planar trajectory.
pub fn envelope(traj: &Trajectory, omega: f64) -> Result<Trajectory> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let states = traj.planar_values()?;
    let omega_sq = omega * omega;
    let values: Vec<f64> = states
        .iter()
        .map(|s| (s[0] * s[0] + s[1] * s[1] / omega_sq).sqrt())
        .collect();
    let mut out = Trajectory::from_scalar_samples(traj.times().to_vec(), values, "envelope")?;
    out.meta.rtol = traj.meta.rtol;
    out.meta.atol = traj.meta.atol;
    Ok(out)
}

/// Largest pointwise gap between two scalar trajectories on a shared grid.
pub fn sup_gap(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.times() != b.times() {
        return Err(Error::ModeMismatch(
            "trajectories sampled on different grids".into(),
        ));
    }
    let va = a.scalar_values()?;
    let vb = b.scalar_values()?;
    Ok(va
        .iter()
        .zip(vb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

impl RadialDrift {
    /// True when the drift is negative for every `r > 0`, i.e. the
    /// amplitude decays monotonically from any start.
    pub fn is_strictly_decaying(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        match cycles::find_cycles(self) {
            Ok(set) => set.roots.is_empty() && self.rate(1e-3) < 0.0,
            Err(_) => false,
        }
    }
}
