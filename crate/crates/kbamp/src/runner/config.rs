//! Experiment configuration: JSON schema, presets, and validation.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::averaging::{average, RadialDrift};
use crate::error::{Error, Result};
use crate::fit::FitWindow;
use crate::integrate::{IntegratorSettings, OutputGrid};
use crate::model::OscillatorModel;

/// Environment variable overriding the configured output directory.
pub const OUTPUT_DIR_ENV: &str = "KBAMP_OUTPUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelClass {
    Vdp,
    Rayleigh,
}

/// Model block of the experiment config. Parameters follow the damping
/// convention `-a^2 + s^2 - alpha s^4 + beta s^6 - gamma s^8 + delta s^10`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub class: ModelClass,
    #[serde(default)]
    pub a: f64,
    #[serde(default)]
    pub alpha: f64,
    #[serde(default)]
    pub beta: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_omega")]
    pub omega: f64,
}

impl ModelSpec {
    pub fn build(&self) -> Result<OscillatorModel> {
        let ctor = match self.class {
            ModelClass::Vdp => OscillatorModel::vdp,
            ModelClass::Rayleigh => OscillatorModel::rayleigh,
        };
        ctor(
            self.a,
            self.alpha,
            self.beta,
            self.gamma,
            self.delta,
            self.epsilon,
            self.omega,
        )
    }
}

/// Output-grid geometry for decay runs. `Sqrt` (the default) warps samples
/// toward the window start so early and late decades carry comparable
/// weight in the unweighted fit; `Uniform` spaces them evenly over
/// `[0, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Uniform,
    #[default]
    Sqrt,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSpec {
    #[serde(default = "default_rtol")]
    pub rtol: f64,
    #[serde(default = "default_atol")]
    pub atol: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub grid: GridKind,
    #[serde(default)]
    pub r_max: Option<f64>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
}

impl Default for IntegratorSpec {
    fn default() -> Self {
        Self {
            rtol: default_rtol(),
            atol: default_atol(),
            t_end: default_t_end(),
            samples: default_samples(),
            grid: GridKind::default(),
            r_max: None,
            max_steps: default_max_steps(),
        }
    }
}

impl IntegratorSpec {
    /// Materializes settings; warped grids anchor at the fit-window start.
    pub fn build(&self, window: &FitWindow) -> IntegratorSettings {
        let grid = match self.grid {
            GridKind::Uniform => OutputGrid::Uniform {
                samples: self.samples,
            },
            GridKind::Sqrt => OutputGrid::SqrtWarped {
                t_start: window.t_start(),
                samples: self.samples,
            },
            GridKind::Log => OutputGrid::LogSpaced {
                t_start: window.t_start(),
                samples: self.samples,
            },
        };
        IntegratorSettings {
            rtol: self.rtol,
            atol: self.atol,
            t_end: self.t_end,
            grid,
            r_max: self.r_max,
            max_steps: self.max_steps,
        }
    }
}

fn default_epsilon() -> f64 {
    0.1
}
fn default_omega() -> f64 {
    1.0
}
fn default_rtol() -> f64 {
    1e-9
}
fn default_atol() -> f64 {
    1e-12
}
fn default_t_end() -> f64 {
    500.0
}
fn default_samples() -> usize {
    2000
}
fn default_max_steps() -> usize {
    10_000_000
}
fn default_ic_count() -> usize {
    1000
}
fn default_seed() -> u64 {
    42
}
fn default_window() -> [f64; 2] {
    [1.0, 500.0]
}
fn default_candidates() -> Vec<u32> {
    vec![1, 2, 3, 4, 5, 6]
}
fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// One experiment: a model, an initial-amplitude interval, and the
/// integrate-and-fit pipeline parameters. Unknown JSON keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    /// Open interval `(low, high)` the random initial amplitudes are drawn
    /// from.
    pub ic_interval: (f64, f64),
    #[serde(default = "default_ic_count")]
    pub ic_count: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub integrator: IntegratorSpec,
    /// Fit window `[t_start, t_end]`.
    #[serde(default = "default_window")]
    pub fit_window: [f64; 2],
    #[serde(default = "default_candidates")]
    pub candidates: Vec<u32>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Initial amplitudes used by the `figures` command; empty means the
    /// interval midpoint.
    #[serde(default)]
    pub figure_r0: Vec<f64>,
}

/// Everything derived from a validated config.
pub struct ExperimentParts {
    pub model: OscillatorModel,
    pub drift: RadialDrift,
    pub settings: IntegratorSettings,
    pub window: FitWindow,
}

impl ExperimentConfig {
    /// Validates the config and builds the model, drift, integrator
    /// settings and fit window. All failures surface as `Config` errors.
    pub fn build_parts(&self) -> Result<ExperimentParts> {
        let wrap = |e: Error| Error::Config(e.to_string());
        let model = self.model.build().map_err(wrap)?;
        let drift = average(&model).map_err(wrap)?;
        let window = FitWindow::new(self.fit_window[0], self.fit_window[1]).map_err(wrap)?;
        let settings = self.integrator.build(&window);
        let (low, high) = self.ic_interval;
        if !(low.is_finite() && high.is_finite() && low > 0.0 && low < high) {
            return Err(Error::Config(format!(
                "ic_interval ({low}, {high}) must satisfy 0 < low < high"
            )));
        }
        if self.ic_count == 0 {
            return Err(Error::Config("ic_count must be at least 1".into()));
        }
        if self.candidates.is_empty() || self.candidates.contains(&0) {
            return Err(Error::Config(
                "candidates must be a nonempty set of positive indices".into(),
            ));
        }
        if window.t_end() > settings.t_end {
            return Err(Error::Config(format!(
                "fit window end {} exceeds integration horizon {}",
                window.t_end(),
                settings.t_end
            )));
        }
        Ok(ExperimentParts {
            model,
            drift,
            settings,
            window,
        })
    }

    /// Output directory after applying the environment override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        match std::env::var_os(OUTPUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => PathBuf::from(dir),
            _ => self.output_dir.clone(),
        }
    }

    /// Initial amplitudes for figure emission.
    pub fn figure_initial_amplitudes(&self) -> Vec<f64> {
        if self.figure_r0.is_empty() {
            vec![0.5 * (self.ic_interval.0 + self.ic_interval.1)]
        } else {
            self.figure_r0.clone()
        }
    }

    /// FNV-1a hash of the canonical JSON serialization; recorded in report
    /// provenance so outputs can be traced to their exact configuration.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in text.bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{h:016x}")
    }
}

/// Names of the shipped preset configurations.
pub const PRESET_NAMES: [&str; 4] = ["vdp-mono", "vdp-bi", "rayleigh-mono", "rayleigh-bi"];

/// A ready-made post-transition (`a = 0`) decay experiment. The two model
/// classes each come in a monorhythmic variant (plain damping) and a
/// birhythmic variant with the classic two-cycle parameter values.
pub fn preset(name: &str) -> Option<ExperimentConfig> {
    let (class, alpha, beta, interval, figure_r0) = match name {
        "vdp-mono" => (ModelClass::Vdp, 0.0, 0.0, (2.4, 4.91), vec![3.97, 4.23]),
        "vdp-bi" => (ModelClass::Vdp, 0.144, 0.005, (2.4, 4.91), vec![3.16, 3.81]),
        "rayleigh-mono" => (ModelClass::Rayleigh, 0.0, 0.0, (1.5, 2.6), vec![2.0, 2.23]),
        "rayleigh-bi" => (
            ModelClass::Rayleigh,
            0.285272,
            0.0244993,
            (1.5, 2.6),
            vec![1.77, 2.51],
        ),
        _ => return None,
    };
    Some(ExperimentConfig {
        model: ModelSpec {
            class,
            a: 0.0,
            alpha,
            beta,
            gamma: 0.0,
            delta: 0.0,
            epsilon: default_epsilon(),
            omega: default_omega(),
        },
        ic_interval: interval,
        ic_count: default_ic_count(),
        seed: default_seed(),
        integrator: IntegratorSpec::default(),
        fit_window: default_window(),
        candidates: default_candidates(),
        output_dir: PathBuf::from("out").join(name),
        figure_r0,
    })
}

/// Loads a config from a JSON file path, or by preset name when no such
/// file exists.
pub fn load_config(source: &str) -> Result<ExperimentConfig> {
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{source}: {e}")))?;
        config.build_parts()?;
        return Ok(config);
    }
    if let Some(config) = preset(source) {
        return Ok(config);
    }
    Err(Error::Config(format!(
        "'{source}' is neither a config file nor a preset (presets: {})",
        PRESET_NAMES.join(", ")
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_build() {
        for name in PRESET_NAMES {
            let config = preset(name).unwrap();
            let parts = config.build_parts().unwrap();
            assert_eq!(parts.model.epsilon(), 0.1);
            assert!(config.figure_initial_amplitudes().len() == 2);
        }
        assert!(preset("nope").is_none());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{
            "model": {"class": "vdp"},
            "ic_interval": [2.4, 4.91],
            "surprise": 1
        }"#;
        let parsed: std::result::Result<ExperimentConfig, _> = serde_json::from_str(text);
        assert!(parsed.is_err());
    }

    #[test]
    fn defaults_fill_in() {
        let text = r#"{"model": {"class": "rayleigh", "alpha": 0.285272, "beta": 0.0244993},
                       "ic_interval": [1.5, 2.6]}"#;
        let config: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.ic_count, 1000);
        assert_eq!(config.seed, 42);
        assert_eq!(config.fit_window, [1.0, 500.0]);
        assert_eq!(config.candidates, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(config.integrator.grid, GridKind::Sqrt);
        assert_eq!(config.model.epsilon, 0.1);
        config.build_parts().unwrap();
    }

    #[test]
    fn bad_interval_is_a_config_error() {
        let mut config = preset("vdp-bi").unwrap();
        config.ic_interval = (3.0, 2.0);
        match config.build_parts() {
            Err(Error::Config(_)) => {}
            other => panic!("expected Config error, got {:?}", other.err()),
        }
    }

    #[test]
    fn bad_model_is_a_config_error() {
        let mut config = preset("vdp-bi").unwrap();
        config.model.epsilon = 1.5;
        assert!(matches!(config.build_parts(), Err(Error::Config(_))));
    }

    #[test]
    fn hash_is_stable_and_sensitive() {
        let a = preset("vdp-bi").unwrap();
        let mut b = preset("vdp-bi").unwrap();
        assert_eq!(a.hash(), b.hash());
        b.seed = 43;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn window_must_fit_inside_horizon() {
        let mut config = preset("vdp-bi").unwrap();
        config.fit_window = [1.0, 1000.0];
        assert!(matches!(config.build_parts(), Err(Error::Config(_))));
    }

    proptest::proptest! {
        // JSON round-trip of the model block is lossless for finite values.
        #[test]
        fn model_spec_round_trips_through_json(
            a in proptest::num::f64::POSITIVE | proptest::num::f64::ZERO,
            alpha in -1.0f64..1.0,
            beta in -1.0f64..1.0,
            epsilon in 0.001f64..0.999,
            omega in 0.01f64..100.0,
        ) {
            let spec = ModelSpec {
                class: ModelClass::Vdp,
                a,
                alpha,
                beta,
                gamma: 0.0,
                delta: 0.0,
                epsilon,
                omega,
            };
            let text = serde_json::to_string(&spec).unwrap();
            let back: ModelSpec = serde_json::from_str(&text).unwrap();
            proptest::prop_assert_eq!(spec, back);
        }
    }
}
