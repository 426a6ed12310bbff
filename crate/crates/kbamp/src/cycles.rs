//! Limit-cycle location and stability classification.
//!
//! Nonzero roots of the averaged radial drift are limit-cycle amplitudes of
//! the underlying oscillator. Writing `dr/dt = eps * r * q(r^2)`, positive
//! roots correspond to roots of the degree <= 5 polynomial `q(u)` with
//! `u = r^2 > 0`. Roots are isolated by splitting `(0, u_bound]` at the
//! critical points of `q` (found recursively from `q'`), so each piece is
//! monotone and holds at most one sign change; brackets are refined by
//! bisection. Tangential roots surface at critical points where `q`
//! vanishes without crossing and are reported as semistable.

use serde::{Deserialize, Serialize};

use crate::averaging::RadialDrift;
use crate::error::{Error, Result};

/// Sign of the drift derivative at a cycle decides how neighbors behave.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Unstable,
    Semistable,
}

/// One limit cycle: amplitude, stability class, and the drift derivative
/// value that decided it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleRoot {
    pub amplitude: f64,
    pub stability: Stability,
    pub derivative: f64,
}

/// All positive drift roots in ascending amplitude order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CycleSet {
    pub roots: Vec<CycleRoot>,
    /// Number of stable cycles: 1 = monorhythmic, 2 = birhythmic, ...
    pub rhythm_count: usize,
}

const DERIVATIVE_BAND: f64 = 1e-9;
const MERGE_RADIUS: f64 = 1e-9;
const BISECT_TOL: f64 = 1e-12;

fn eval_poly(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

fn derivative_poly(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// Cauchy bound: every real root of `c` lies in `[-b, b]`.
fn cauchy_bound(c: &[f64]) -> f64 {
    let lead = *c.last().expect("nonempty polynomial");
    let max_ratio = c[..c.len() - 1]
        .iter()
        .map(|ck| (ck / lead).abs())
        .fold(0.0, f64::max);
    1.0 + max_ratio
}

fn bisect(c: &[f64], mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = eval_poly(c, lo);
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = eval_poly(c, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_lo < 0.0) != (f_mid < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    0.5 * (lo + hi)
}

/// All real roots of `c` inside `[lo, hi]`, ascending, via monotone
/// subdivision at the critical points of `c`.
fn poly_roots_in(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let mut c = c.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new(); // constant: either no roots or identically zero
    }
    if c.len() == 2 {
        let root = -c[0] / c[1];
        return if root >= lo && root <= hi {
            vec![root]
        } else {
            Vec::new()
        };
    }
    let mut cuts = vec![lo];
    for cp in poly_roots_in(&derivative_poly(&c), lo, hi) {
        if cp > *cuts.last().unwrap() && cp < hi {
            cuts.push(cp);
        }
    }
    cuts.push(hi);

    // Scale for the "effectively zero" test at interval endpoints.
    let coeff_scale = c.iter().fold(0.0f64, |m, ck| m.max(ck.abs()));
    let zero_tol = coeff_scale * 1e-13;

    let mut roots = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if roots.last().is_none_or(|&p| r - p > BISECT_TOL) {
            roots.push(r);
        }
    };
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let fa = eval_poly(&c, a);
        let fb = eval_poly(&c, b);
        if fa.abs() <= zero_tol {
            push(a, &mut roots);
        }
        if fa.abs() > zero_tol && fb.abs() > zero_tol && (fa < 0.0) != (fb < 0.0) {
            push(bisect(&c, a, b), &mut roots);
        }
        if fb.abs() <= zero_tol {
            push(b, &mut roots);
        }
    }
    roots
}

/// Locates every positive root of the averaged drift and classifies its
/// stability from the sign of `d(dr/dt)/dr`.
pub fn find_cycles(drift: &RadialDrift) -> Result<CycleSet> {
    if drift.is_zero() {
        return Err(Error::ZeroDrift);
    }
    let q = drift.radial_polynomial();
    let u_bound = cauchy_bound(&q);
    let mut amplitudes: Vec<f64> = poly_roots_in(&q, 0.0, u_bound)
        .into_iter()
        .filter(|&u| u > 1e-12)
        .map(f64::sqrt)
        .collect();
    amplitudes.dedup_by(|b, a| *b - *a <= MERGE_RADIUS);

    let roots: Vec<CycleRoot> = amplitudes
        .into_iter()
        .map(|r| {
            let derivative = drift.rate_derivative(r);
            let stability = if derivative < -DERIVATIVE_BAND {
                Stability::Stable
            } else if derivative > DERIVATIVE_BAND {
                Stability::Unstable
            } else {
                Stability::Semistable
            };
            CycleRoot {
                amplitude: r,
                stability,
                derivative,
            }
        })
        .collect();
    let rhythm_count = roots
        .iter()
        .filter(|r| r.stability == Stability::Stable)
        .count();
    Ok(CycleSet { roots, rhythm_count })
}
