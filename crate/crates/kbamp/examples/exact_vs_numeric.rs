//! Check the adaptive integrator against the closed-form decay of the
//! plain monorhythmic case, across tolerance settings.
//!
//! ```bash
//! cargo run --example exact_vs_numeric
//! ```

use kbamp::{average, exact_monorhythmic, integrate_amplitude, IntegratorSettings, OscillatorModel};

fn main() -> kbamp::Result<()> {
    let eps = 0.1;
    let r0 = 4.0;
    let model = OscillatorModel::vdp(0.0, 0.0, 0.0, 0.0, 0.0, eps, 1.0)?;
    let drift = average(&model)?;

    println!("dr/dt = -eps r^3/8 decays as r(t) = 2 / sqrt(4/r0^2 + eps t)");
    println!("r0 = {r0}, eps = {eps}, horizon t = 1000\n");
    println!("rtol       atol       max relative error");
    for k in 0..5 {
        let settings = IntegratorSettings {
            rtol: 1e-5 * 10f64.powi(-k),
            atol: 1e-8 * 10f64.powi(-k),
            t_end: 1000.0,
            ..Default::default()
        };
        let traj = integrate_amplitude(&drift, r0, &settings)?;
        let worst = traj
            .times()
            .iter()
            .zip(traj.scalar_values()?)
            .map(|(&t, &r)| {
                let exact = exact_monorhythmic(r0, eps, t).unwrap();
                (r - exact).abs() / exact
            })
            .fold(0.0, f64::max);
        println!("{:<10.0e} {:<10.0e} {worst:.3e}", settings.rtol, settings.atol);
    }
    Ok(())
}
