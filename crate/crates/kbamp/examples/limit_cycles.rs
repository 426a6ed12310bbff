//! Locate limit cycles and watch them disappear at the a -> 0 transition.
//!
//! ```bash
//! cargo run --example limit_cycles
//! ```

use kbamp::{average, find_cycles, OscillatorModel};

fn show(label: &str, model: &OscillatorModel) -> kbamp::Result<()> {
    let drift = average(model)?;
    let set = find_cycles(&drift)?;
    println!("{label}: {} stable cycle(s)", set.rhythm_count);
    if set.roots.is_empty() {
        println!("  no limit cycles: every trajectory decays toward the origin");
    }
    for root in &set.roots {
        println!(
            "  r* = {:<10.6} {:<10?} d(dr/dt)/dr = {:+.6e}",
            root.amplitude, root.stability, root.derivative
        );
    }
    Ok(())
}

fn main() -> kbamp::Result<()> {
    show(
        "classic Van der Pol (a = 1)",
        &OscillatorModel::vdp(1.0, 0.0, 0.0, 0.0, 0.0, 0.1, 1.0)?,
    )?;
    show(
        "birhythmic Van der Pol (a = 1)",
        &OscillatorModel::vdp(1.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0)?,
    )?;
    show(
        "birhythmic Rayleigh (a = 1)",
        &OscillatorModel::rayleigh(1.0, 0.285272, 0.0244993, 0.0, 0.0, 0.1, 1.0)?,
    )?;
    // Switching off the constant damping offset removes every cycle: the
    // same damping profiles now admit only decaying center-like motion.
    show(
        "birhythmic Van der Pol after the transition (a = 0)",
        &OscillatorModel::vdp(0.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0)?,
    )?;
    show(
        "birhythmic Rayleigh after the transition (a = 0)",
        &OscillatorModel::rayleigh(0.0, 0.285272, 0.0244993, 0.0, 0.0, 0.1, 1.0)?,
    )?;
    Ok(())
}
