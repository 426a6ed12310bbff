//! Krylov-Bogoliubov averaging in exact rational arithmetic.
//!
//! Substituting the slowly varying ansatz `x = r cos(omega t + phi)`,
//! `x' = -omega r sin(omega t + phi)` into the weakly nonlinear oscillator
//! and averaging the amplitude flow over one period reduces the dynamics to
//! a scalar radial drift
//!
//! ```text
//!     dr/dt = eps * sum_k d_(2k+1) r^(2k+1),
//! ```
//!
//! with the phase drift identically zero for every even damping polynomial.
//! For the position class the period averages involved are
//! `W_k = <cos^(2k) sin^2> = (2k-1)!!/(2k+2)!!`, and for the velocity class
//! `S_k = <sin^(2k+2)> = (2k+1)!!/(2k+2)!!` (Wallis's formulas), giving
//!
//! ```text
//!     position class:  d_(2k+1) = -c_k W_k
//!     velocity class:  d_(2k+1) = -c_k S_k omega^(2k)
//! ```
//!
//! Coefficients stay exact rationals throughout, so the classic 1/1024
//! integer patterns fall out as equalities.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::model::{DampingClass, OscillatorModel, MAX_COEFFS};
use crate::rational::{
    format_rational, rational_from_decimal, rational_sign, rational_to_f64, ratio,
};

/// Period averages of `cos^(2k) sin^2` (`cos_sin2`) and `sin^(2k+2)`
/// (`sin_even`) for k = 0..5.
#[derive(Debug, Clone, PartialEq)]
pub struct WallisTable {
    pub cos_sin2: [BigRational; MAX_COEFFS],
    pub sin_even: [BigRational; MAX_COEFFS],
}

/// Odd double factorial ladder: returns `(2k-1)!!` with `(-1)!! = 1`.
fn odd_double_factorial(k: u32) -> BigRational {
    let mut acc = BigRational::one();
    let mut n = 1i64;
    for _ in 0..k {
        acc *= ratio(n, 1);
        n += 2;
    }
    acc
}

/// Even double factorial: `(2m)!!`.
fn even_double_factorial(m: u32) -> BigRational {
    let mut acc = BigRational::one();
    for j in 1..=m as i64 {
        acc *= ratio(2 * j, 1);
    }
    acc
}

/// Exact trigonometric moment table used by the averaging step.
pub fn wallis_table() -> WallisTable {
    let cos_sin2 = std::array::from_fn(|k| {
        odd_double_factorial(k as u32) / even_double_factorial(k as u32 + 1)
    });
    let sin_even = std::array::from_fn(|k| {
        odd_double_factorial(k as u32 + 1) / even_double_factorial(k as u32 + 1)
    });
    WallisTable { cos_sin2, sin_even }
}

/// The averaged radial flow `dr/dt = eps * sum_k d_(2k+1) r^(2k+1)` together
/// with the (identically zero) averaged phase drift.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDrift {
    dcoeffs: Vec<BigRational>,
    phase_drift: BigRational,
    epsilon: f64,
}

impl RadialDrift {
    /// Builds a drift directly from `d_1, d_3, ...` coefficients.
    pub fn from_coefficients(dcoeffs: Vec<BigRational>, epsilon: f64) -> Self {
        let mut dcoeffs = dcoeffs;
        dcoeffs.resize(MAX_COEFFS, BigRational::zero());
        Self {
            dcoeffs,
            phase_drift: BigRational::zero(),
            epsilon,
        }
    }

    /// Coefficient of `r^(2k+1)` at index k; always length 6.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.dcoeffs
    }

    /// Constant averaged phase velocity contribution (zero in this class).
    pub fn phase_drift(&self) -> &BigRational {
        &self.phase_drift
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_zero(&self) -> bool {
        self.dcoeffs.iter().all(Zero::is_zero)
    }

    /// Coefficients of `q(u) = sum_k d_(2k+1) u^k` as `f64`, so that
    /// `dr/dt = eps * r * q(r^2)`. Trailing zeros trimmed.
    pub fn radial_polynomial(&self) -> Vec<f64> {
        let mut q: Vec<f64> = self.dcoeffs.iter().map(rational_to_f64).collect();
        while q.len() > 1 && q.last() == Some(&0.0) {
            q.pop();
        }
        q
    }

    /// Radial velocity `dr/dt` at amplitude `r`.
    pub fn rate(&self, r: f64) -> f64 {
        let u = r * r;
        let mut q = 0.0;
        for d in self.dcoeffs.iter().rev() {
            q = q * u + rational_to_f64(d);
        }
        self.epsilon * r * q
    }

    /// Derivative `d(dr/dt)/dr` at amplitude `r`; the sign classifies the
    /// stability of a cycle at a drift root.
    pub fn rate_derivative(&self, r: f64) -> f64 {
        let u = r * r;
        let mut acc = 0.0;
        for (k, d) in self.dcoeffs.iter().enumerate().rev() {
            acc += (2 * k + 1) as f64 * rational_to_f64(d) * u.powi(k as i32);
        }
        self.epsilon * acc
    }
}

/// Averages the amplitude flow of `model` over one period, producing the
/// exact radial drift. Fails only if `omega` has no finite decimal reading.
pub fn average(model: &OscillatorModel) -> Result<RadialDrift> {
    let table = wallis_table();
    let omega = rational_from_decimal(model.omega())?;
    let omega_sq = &omega * &omega;
    let mut omega_pow = BigRational::one(); // omega^(2k)
    let mut dcoeffs = Vec::with_capacity(MAX_COEFFS);
    for (k, c) in model.coeffs().iter().enumerate() {
        let moment = match model.class() {
            DampingClass::PositionPolynomial => table.cos_sin2[k].clone(),
            DampingClass::VelocityPolynomial => &table.sin_even[k] * &omega_pow,
        };
        dcoeffs.push(-c * moment);
        omega_pow *= &omega_sq;
    }
    Ok(RadialDrift::from_coefficients(dcoeffs, model.epsilon()))
}

fn push_term(out: &mut String, sign: i8, body: &str, first: bool) {
    if first {
        if sign < 0 {
            out.push_str("-(");
        } else {
            out.push('(');
        }
    } else if sign < 0 {
        out.push_str(" - (");
    } else {
        out.push_str(" + (");
    }
    out.push_str(body);
    out.push(')');
}

fn power_suffix(power: usize) -> String {
    if power == 1 {
        " r".to_string()
    } else {
        format!(" r^{power}")
    }
}

/// Human-readable averaged equation with reduced-fraction coefficients in
/// ascending powers, e.g. `dr/dt = eps*( (1/2) r - (1/8) r^3 )`.
pub fn render_equation(drift: &RadialDrift) -> String {
    if drift.is_zero() {
        return "dr/dt = 0".to_string();
    }
    let mut body = String::new();
    let mut first = true;
    for (k, d) in drift.coefficients().iter().enumerate() {
        if d.is_zero() {
            continue;
        }
        let magnitude = if rational_sign(d) < 0 { -d.clone() } else { d.clone() };
        push_term(&mut body, rational_sign(d), &format_rational(&magnitude), first);
        body.push_str(&power_suffix(2 * k + 1));
        first = false;
    }
    format!("dr/dt = eps*( {body} )")
}

/// Renders the general averaged pattern for a damping class with the named
/// parameters kept symbolic: `a^2, alpha, beta, gamma, delta`. With
/// `with_offset = false` the `a^2` term is dropped (the post-transition
/// `a = 0` form).
pub fn render_generic_equation(class: DampingClass, with_offset: bool) -> String {
    let table = wallis_table();
    let moments = match class {
        DampingClass::PositionPolynomial => &table.cos_sin2,
        DampingClass::VelocityPolynomial => &table.sin_even,
    };
    // Named-parameter signs: c = (-a^2, 1, -alpha, beta, -gamma, delta),
    // d_(2k+1) = -c_k m_k.
    let names: [Option<&str>; MAX_COEFFS] =
        [Some("a^2"), None, Some("alpha"), Some("beta"), Some("gamma"), Some("delta")];
    let signs: [i8; MAX_COEFFS] = [1, -1, 1, -1, 1, -1];
    let mut body = String::new();
    let mut first = true;
    for k in 0..MAX_COEFFS {
        if k == 0 && !with_offset {
            continue;
        }
        push_term(&mut body, signs[k], &format_rational(&moments[k]), first);
        if let Some(name) = names[k] {
            body.push(' ');
            body.push_str(name);
        }
        body.push_str(&power_suffix(2 * k + 1));
        first = false;
    }
    format!("dr/dt = eps*( {body} )")
}
