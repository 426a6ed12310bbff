//! Compare the full second-order oscillator against its averaged
//! amplitude equation: the envelope sqrt(x^2 + v^2/omega^2) should track
//! the scalar drift to first order in eps.
//!
//! ```bash
//! cargo run --example full_oscillator_envelope
//! ```

use kbamp::{
    average, envelope, integrate_amplitude, integrate_full, sup_gap, IntegratorSettings,
    OscillatorModel,
};

fn main() -> kbamp::Result<()> {
    let model = OscillatorModel::vdp(0.0, 0.144, 0.005, 0.0, 0.0, 0.1, 1.0)?;
    let drift = average(&model)?;
    let settings = IntegratorSettings {
        t_end: 200.0,
        ..Default::default()
    };

    let x0 = 3.16;
    let full = integrate_full(&model, x0, 0.0, &settings)?;
    let env = envelope(&full, model.omega())?;
    let amp = integrate_amplitude(&drift, x0, &settings)?;

    println!("birhythmic Van der Pol, a = 0, eps = 0.1, (x0, v0) = ({x0}, 0)\n");
    println!("t        envelope     averaged     gap");
    let times = amp.times();
    let env_values = env.scalar_values()?;
    let amp_values = amp.scalar_values()?;
    for idx in (0..times.len()).step_by(times.len() / 10) {
        println!(
            "{:<8.1} {:<12.6} {:<12.6} {:+.2e}",
            times[idx],
            env_values[idx],
            amp_values[idx],
            env_values[idx] - amp_values[idx]
        );
    }
    println!(
        "\nsup-norm gap on [0, {}]: {:.4} (first-order averaging allowance: {})",
        settings.t_end,
        sup_gap(&env, &amp)?,
        10.0 * model.epsilon()
    );
    Ok(())
}
