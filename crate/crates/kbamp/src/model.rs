//! Oscillator model definitions.
//!
//! Both model classes share the weakly nonlinear form
//!
//! ```text
//!     x'' + eps * g(s) * x' + omega^2 * x = 0,      0 < eps < 1,
//! ```
//!
//! where the damping profile `g(s) = sum_k c_k s^(2k)` is an even
//! polynomial in either the position (`s = x`, Van der Pol class) or the
//! velocity (`s = x'`, Rayleigh class). The named constructors follow the
//! usual sign convention
//! `g(s) = -a^2 + s^2 - alpha s^4 + beta s^6 - gamma s^8 + delta s^10`;
//! the raw coefficient list accepts any even polynomial of degree <= 10.

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{rational_from_decimal, rational_sqrt_exact, rational_to_f64};

/// Maximum number of even-power coefficients (degree 10 in `s`).
pub const MAX_COEFFS: usize = 6;

/// Which variable the damping polynomial reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DampingClass {
    /// `g(x)`: Van der Pol class.
    PositionPolynomial,
    /// `g(x')`: Rayleigh class.
    VelocityPolynomial,
}

/// An oscillator specification. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorModel {
    class: DampingClass,
    coeffs: Vec<BigRational>,
    epsilon: f64,
    omega: f64,
}

impl OscillatorModel {
    /// Builds a model from raw even-polynomial coefficients `c_0..c_5`.
    pub fn new(
        class: DampingClass,
        coeffs: Vec<BigRational>,
        epsilon: f64,
        omega: f64,
    ) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie strictly inside (0, 1), got {epsilon}"
            )));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "omega must be positive and finite, got {omega}"
            )));
        }
        if coeffs.len() > MAX_COEFFS {
            return Err(Error::InvalidParameter(format!(
                "damping polynomial limited to degree 10 ({MAX_COEFFS} even coefficients), got {}",
                coeffs.len()
            )));
        }
        let mut coeffs = coeffs;
        coeffs.resize(MAX_COEFFS, BigRational::zero());
        Ok(Self {
            class,
            coeffs,
            epsilon,
            omega,
        })
    }

    /// Van der Pol class model with damping
    /// `-a^2 + x^2 - alpha x^4 + beta x^6 - gamma x^8 + delta x^10`.
    #[allow(clippy::too_many_arguments)]
    pub fn vdp(
        a: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        epsilon: f64,
        omega: f64,
    ) -> Result<Self> {
        Self::from_named(
            DampingClass::PositionPolynomial,
            a,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            omega,
        )
    }

    /// Rayleigh class model with damping
    /// `-a^2 + x'^2 - alpha x'^4 + beta x'^6 - gamma x'^8 + delta x'^10`.
    #[allow(clippy::too_many_arguments)]
    pub fn rayleigh(
        a: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        epsilon: f64,
        omega: f64,
    ) -> Result<Self> {
        Self::from_named(
            DampingClass::VelocityPolynomial,
            a,
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            omega,
        )
    }

    #[allow(clippy::too_many_arguments)]
    fn from_named(
        class: DampingClass,
        a: f64,
        alpha: f64,
        beta: f64,
        gamma: f64,
        delta: f64,
        epsilon: f64,
        omega: f64,
    ) -> Result<Self> {
        let a = rational_from_decimal(a)?;
        let coeffs = vec![
            -(&a * &a),
            rational_from_decimal(1.0)?,
            -rational_from_decimal(alpha)?,
            rational_from_decimal(beta)?,
            -rational_from_decimal(gamma)?,
            rational_from_decimal(delta)?,
        ];
        Self::new(class, coeffs, epsilon, omega)
    }

    pub fn class(&self) -> DampingClass {
        self.class
    }

    /// Even-polynomial coefficients `c_0..c_5`, always length 6.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// Recovers the named parameters `(a, alpha, beta, gamma, delta)` from
    /// the signed coefficient list. `a` is `sqrt(-c_0)` and therefore only
    /// available when `-c_0` is a perfect rational square, which holds for
    /// every model built by the named constructors.
    pub fn named_parameters(&self) -> (Option<BigRational>, [BigRational; 4]) {
        let a = rational_sqrt_exact(&-self.coeffs[0].clone());
        let named = [
            -self.coeffs[2].clone(),
            self.coeffs[3].clone(),
            -self.coeffs[4].clone(),
            self.coeffs[5].clone(),
        ];
        (a, named)
    }

    /// Evaluates the damping profile `g(s)` in floating point.
    pub fn damping_value(&self, s: f64) -> f64 {
        let u = s * s;
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * u + rational_to_f64(c);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    #[test]
    fn classic_vdp_coefficients() {
        let m = OscillatorModel::vdp(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, 1.0).unwrap();
        assert_eq!(m.class(), DampingClass::PositionPolynomial);
        assert_eq!(
            m.coeffs(),
            &[
                ratio(-1, 1),
                ratio(1, 1),
                ratio(0, 1),
                ratio(0, 1),
                ratio(0, 1),
                ratio(0, 1)
            ]
        );
    }

    #[test]
    fn null_offset_vdp() {
        let m = OscillatorModel::vdp(0.0, 0.0, 0.0, 0.0, 0.0, 0.1, 1.0).unwrap();
        assert_eq!(m.coeffs()[0], ratio(0, 1));
        assert_eq!(m.coeffs()[1], ratio(1, 1));
    }

    #[test]
    fn birhythmic_vdp_coefficients_are_exact_decimals() {
        let m = OscillatorModel::vdp(0.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0).unwrap();
        assert_eq!(m.coeffs()[2], ratio(-18, 125)); // -0.144 exactly
        assert_eq!(m.coeffs()[3], ratio(1, 200)); // 0.005 exactly
    }

    #[test]
    fn birhythmic_rayleigh_coefficients() {
        let m = OscillatorModel::rayleigh(0.0, 0.285272, 0.0244993, 0.0, 0.0, 0.1, 1.0).unwrap();
        assert_eq!(m.class(), DampingClass::VelocityPolynomial);
        assert_eq!(m.coeffs()[2], ratio(-35659, 125_000));
        assert_eq!(m.coeffs()[3], ratio(244_993, 10_000_000));
    }

    #[test]
    fn unit_offset_rayleigh() {
        let m = OscillatorModel::rayleigh(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, 1.0).unwrap();
        assert_eq!(m.coeffs()[0], ratio(-1, 1));
        assert_eq!(m.coeffs()[1], ratio(1, 1));
    }

    #[test]
    fn epsilon_outside_unit_interval_is_rejected() {
        for eps in [1.5, 0.0, 1.0, -0.1] {
            let r = OscillatorModel::rayleigh(1.0, 0.0, 0.0, 0.0, 0.0, eps, 1.0);
            assert!(matches!(r, Err(Error::InvalidParameter(_))), "eps={eps}");
        }
    }

    #[test]
    fn nonpositive_omega_is_rejected() {
        assert!(OscillatorModel::vdp(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, 0.0).is_err());
        assert!(OscillatorModel::vdp(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, -2.0).is_err());
    }

    #[test]
    fn too_many_coefficients_rejected() {
        let coeffs = vec![ratio(1, 1); 7];
        assert!(matches!(
            OscillatorModel::new(DampingClass::PositionPolynomial, coeffs, 0.1, 1.0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn damping_value_matches_polynomial() {
        let m = OscillatorModel::vdp(1.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0).unwrap();
        let s: f64 = 1.7;
        let expected = -1.0 + s.powi(2) - 0.144 * s.powi(4) + 0.005 * s.powi(6);
        assert!((m.damping_value(s) - expected).abs() < 1e-12);
    }

    proptest! {
        // The signed-coefficient convention is a bijection on the named
        // parameters: construct, then read back exactly.
        #[test]
        fn named_parameters_round_trip(
            a in 0.0f64..3.0,
            alpha in 0.0f64..1.0,
            beta in 0.0f64..1.0,
            gamma in 0.0f64..1.0,
            delta in 0.0f64..1.0,
        ) {
            let m = OscillatorModel::vdp(a, alpha, beta, gamma, delta, 0.1, 1.0).unwrap();
            let (a_back, named) = m.named_parameters();
            prop_assert_eq!(a_back.unwrap(), rational_from_decimal(a).unwrap());
            prop_assert_eq!(&named[0], &rational_from_decimal(alpha).unwrap());
            prop_assert_eq!(&named[1], &rational_from_decimal(beta).unwrap());
            prop_assert_eq!(&named[2], &rational_from_decimal(gamma).unwrap());
            prop_assert_eq!(&named[3], &rational_from_decimal(delta).unwrap());
        }
    }
}
