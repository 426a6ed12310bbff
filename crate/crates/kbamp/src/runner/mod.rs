//! Batch orchestration: configuration, seeded sweeps, and file emission.

mod config;
mod figures;
mod sweep;

pub use config::{
    load_config, preset, ExperimentConfig, ExperimentParts, GridKind, IntegratorSpec, ModelClass,
    ModelSpec, OUTPUT_DIR_ENV, PRESET_NAMES,
};
pub use figures::{emit_decay_data, emit_figure_data, FigureFiles};
pub use sweep::{
    decay_pipeline, run_sweep, sample_ics, FitRow, IcRecord, Provenance, SweepAggregate,
    SweepReport,
};

use serde::Serialize;

use crate::error::Result;
use crate::integrate::{envelope, integrate_amplitude, integrate_full, sup_gap, OutputGrid};

/// Result of checking the averaged amplitude equation against the full
/// oscillator it approximates.
#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeValidation {
    pub r0: f64,
    pub t_end: f64,
    pub sup_gap: f64,
    /// First-order averaging accuracy allowance, `10 * eps`.
    pub threshold: f64,
    pub pass: bool,
}

/// Integrates the full oscillator from `(x0, v0) = (r0, 0)` and the
/// averaged amplitude equation from `r0`, then measures the largest
/// envelope gap over the averaging-accuracy horizon `min(t_end, 20/eps)`.
pub fn validate_envelope(config: &ExperimentConfig, r0: f64) -> Result<EnvelopeValidation> {
    let parts = config.build_parts()?;
    let eps = parts.model.epsilon();
    let mut settings = parts.settings.clone();
    settings.t_end = settings.t_end.min(20.0 / eps);
    settings.grid = OutputGrid::Uniform {
        samples: config.integrator.samples,
    };
    let full = integrate_full(&parts.model, r0, 0.0, &settings)?;
    let env = envelope(&full, parts.model.omega())?;
    let amp = integrate_amplitude(&parts.drift, r0, &settings)?;
    let gap = sup_gap(&env, &amp)?;
    let threshold = 10.0 * eps;
    Ok(EnvelopeValidation {
        r0,
        t_end: settings.t_end,
        sup_gap: gap,
        threshold,
        pass: gap <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_validation_passes_for_presets() {
        for (name, r0) in [("vdp-bi", 3.16), ("rayleigh-bi", 1.77)] {
            let mut config = preset(name).unwrap();
            config.integrator.samples = 500;
            let report = validate_envelope(&config, r0).unwrap();
            assert!(
                report.pass,
                "{name}: gap {} > {}",
                report.sup_gap, report.threshold
            );
            assert_eq!(report.t_end, 200.0);
        }
    }
}
