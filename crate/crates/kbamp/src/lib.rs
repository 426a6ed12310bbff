//! Krylov-Bogoliubov amplitude toolkit for polynomially damped oscillators.
//!
//! The crate studies weakly nonlinear oscillators of the form
//! `x'' + eps g(s) x' + omega^2 x = 0`, where the damping profile `g` is an
//! even polynomial in the position (Van der Pol class) or the velocity
//! (Rayleigh class). It provides:
//!
//! - [`model`]: oscillator specifications with exact rational coefficients;
//! - [`averaging`]: the period-averaged radial drift `dr/dt = eps *
//!   sum d_(2k+1) r^(2k+1)`, derived in exact arithmetic;
//! - [`cycles`]: limit-cycle amplitudes and stability from the drift roots;
//! - [`integrate`]: adaptive Dormand-Prince integration of the amplitude
//!   equation and of the full planar oscillator, with a closed-form oracle
//!   for the plain monorhythmic decay;
//! - [`fit`]: power-law fitting `C t^(-1/n)` with least-MSE index selection
//!   plus continuous and log-log cross-check estimators;
//! - [`runner`]: JSON-configured experiments, seeded random-IC sweeps, and
//!   plot-ready CSV emission.
//!
//! Each capability has a runnable demonstration under `examples/`:
//!
//! ```text
//! cargo run --example averaged_equations
//! cargo run --example limit_cycles
//! cargo run --example exact_vs_numeric
//! cargo run --example decay_and_fit
//! cargo run --example full_oscillator_envelope
//! cargo run --example sweep_modal_exponent
//! cargo run --example figure_data
//! ```
//!
//! The thin `kbamp` binary exposes the same pipeline as subcommands
//! (`average`, `cycles`, `decay`, `sweep`, `validate`, `figures`).

pub mod averaging;
pub mod cycles;
pub mod error;
pub mod fit;
pub mod integrate;
pub mod model;
pub mod rational;
pub mod runner;

pub use averaging::{average, render_equation, render_generic_equation, RadialDrift, WallisTable};
pub use cycles::{find_cycles, CycleRoot, CycleSet, Stability};
pub use error::{Error, Result};
pub use fit::{
    fit_continuous, fit_fixed_n, fit_loglog, select_n, EstimatorMethod, ExponentEstimate,
    FitWindow, NSelection, PowerLawFit,
};
pub use integrate::{
    envelope, exact_monorhythmic, integrate_amplitude, integrate_full, sup_gap,
    IntegratorSettings, OutputGrid, Trajectory, TrajectoryValues,
};
pub use model::{DampingClass, OscillatorModel};
pub use runner::{
    emit_figure_data, load_config, preset, run_sweep, sample_ics, validate_envelope,
    ExperimentConfig, SweepReport, PRESET_NAMES,
};
