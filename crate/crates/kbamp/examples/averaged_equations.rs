//! Derive averaged amplitude equations for the classic oscillator families.
//!
//! ```bash
//! cargo run --example averaged_equations
//! ```

use kbamp::{average, render_equation, render_generic_equation, DampingClass, OscillatorModel};

fn main() -> kbamp::Result<()> {
    println!("General averaged patterns (named parameters kept symbolic):");
    println!(
        "  position class: {}",
        render_generic_equation(DampingClass::PositionPolynomial, true)
    );
    println!(
        "  velocity class: {}",
        render_generic_equation(DampingClass::VelocityPolynomial, true)
    );
    println!();

    let cases = [
        (
            "classic Van der Pol (a = 1)",
            OscillatorModel::vdp(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, 1.0)?,
        ),
        (
            "birhythmic Van der Pol (a = 1, alpha = 0.144, beta = 0.005)",
            OscillatorModel::vdp(1.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0)?,
        ),
        (
            "post-transition birhythmic Van der Pol (a = 0)",
            OscillatorModel::vdp(0.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0)?,
        ),
        (
            "birhythmic Rayleigh (a = 1, alpha = 0.285272, beta = 0.0244993)",
            OscillatorModel::rayleigh(1.0, 0.285272, 0.0244993, 0.0, 0.0, 0.1, 1.0)?,
        ),
        (
            "post-transition birhythmic Rayleigh (a = 0)",
            OscillatorModel::rayleigh(0.0, 0.285272, 0.0244993, 0.0, 0.0, 0.1, 1.0)?,
        ),
    ];
    for (label, model) in cases {
        let drift = average(&model)?;
        println!("{label}:");
        println!("  {}", render_equation(&drift));
    }
    Ok(())
}
