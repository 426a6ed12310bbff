//! Thin CLI over the library pipeline.

use clap::{Parser, Subcommand};
use serde_json::json;

use kbamp::rational::rational_string_pair;
use kbamp::runner::{
    emit_decay_data, emit_figure_data, load_config, run_sweep, validate_envelope,
    ExperimentConfig, OUTPUT_DIR_ENV, PRESET_NAMES,
};
use kbamp::{find_cycles, render_equation, Error, Result};

#[derive(Parser)]
#[command(
    name = "kbamp",
    version,
    about = "Averaged amplitude equations, limit cycles, and power-law decay fits \
             for polynomially damped oscillators",
    after_help = format!(
        "CONFIG accepts a JSON file path or a preset name ({}).\n\n\
         Config keys and defaults:\n  \
         model: {{class (\"vdp\" | \"rayleigh\"), a = 0, alpha = 0, beta = 0, gamma = 0,\n         \
         delta = 0, epsilon = 0.1, omega = 1}}\n  \
         ic_interval: (low, high), required\n  \
         ic_count = 1000, seed = 42\n  \
         integrator: {{rtol = 1e-9, atol = 1e-12, t_end = 500, samples = 2000,\n              \
         grid = \"sqrt\" (\"uniform\" | \"sqrt\" | \"log\"), r_max = auto,\n              \
         max_steps = 10000000}}\n  \
         fit_window = [1, 500], candidates = [1, 2, 3, 4, 5, 6]\n  \
         output_dir = \"out\", figure_r0 = [] (interval midpoint)\n\n\
         The {} environment variable overrides the configured output directory.\n\
         Exit codes: 0 success, 1 config error, 2 runtime failure.",
        PRESET_NAMES.join(", "),
        OUTPUT_DIR_ENV,
    )
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the averaged amplitude equation and its exact coefficients
    Average {
        /// Config file path or preset name
        config: String,
    },
    /// Locate limit cycles of the averaged drift and classify stability
    Cycles {
        /// Config file path or preset name
        config: String,
    },
    /// Integrate one decay trajectory and fit the exponent index
    Decay {
        /// Config file path or preset name
        config: String,
        /// Initial amplitude
        #[arg(long)]
        r0: f64,
    },
    /// Run the seeded random-IC sweep and write report files
    Sweep {
        /// Config file path or preset name
        config: String,
        /// Override the config seed
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores)
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check the full-oscillator envelope against the averaged amplitude
    Validate {
        /// Config file path or preset name
        config: String,
        /// Initial amplitude (full oscillator starts at (r0, 0))
        #[arg(long)]
        r0: f64,
    },
    /// Emit plot-ready trajectory and fit-table files
    Figures {
        /// Config file path or preset name
        config: String,
        /// Initial amplitudes (default: config figure_r0 list)
        #[arg(long = "r0")]
        r0: Vec<f64>,
    },
}

fn cmd_average(config: &ExperimentConfig) -> Result<()> {
    let parts = config.build_parts()?;
    let drift = &parts.drift;
    println!("{}", render_equation(drift));
    let coefficients: Vec<_> = drift
        .coefficients()
        .iter()
        .enumerate()
        .map(|(k, d)| {
            let (numerator, denominator) = rational_string_pair(d);
            json!({
                "power": 2 * k + 1,
                "numerator": numerator,
                "denominator": denominator,
            })
        })
        .collect();
    let (pd_num, pd_den) = rational_string_pair(drift.phase_drift());
    let payload = json!({
        "equation": render_equation(drift),
        "epsilon": drift.epsilon(),
        "phase_drift": { "numerator": pd_num, "denominator": pd_den },
        "coefficients": coefficients,
    });
    println!("{}", serde_json::to_string_pretty(&payload).expect("json"));
    Ok(())
}

fn cmd_cycles(config: &ExperimentConfig) -> Result<()> {
    let parts = config.build_parts()?;
    let set = find_cycles(&parts.drift)?;
    println!("{}", serde_json::to_string_pretty(&set).expect("json"));
    Ok(())
}

fn cmd_decay(config: &ExperimentConfig, r0: f64) -> Result<()> {
    let (traj_path, fits_path, selection) = emit_decay_data(config, r0)?;
    println!("n      C             mse");
    for fit in &selection.table {
        println!("{:<6} {:<13.6e} {:.6e}", fit.n, fit.prefactor, fit.mse);
    }
    println!(
        "best fit: n = {} (C = {:.6}, mse = {:.6e}){}",
        selection.best.n,
        selection.best.prefactor,
        selection.best.mse,
        if selection.tie { " [tie]" } else { "" }
    );
    println!("wrote {}", traj_path.display());
    println!("wrote {}", fits_path.display());
    Ok(())
}

fn cmd_sweep(config: &ExperimentConfig, threads: Option<usize>) -> Result<()> {
    let report = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run_sweep(config)),
        None => run_sweep(config),
    }?;
    let (json_path, csv_path) = report.write(&config.resolved_output_dir())?;
    println!(
        "{} ICs: {} fitted, {} failed",
        config.ic_count, report.aggregate.successes, report.aggregate.failures
    );
    for (n, count) in &report.aggregate.histogram {
        println!("  n = {n}: {count}");
    }
    match report.aggregate.modal_n {
        Some(n) => println!(
            "modal n = {n} ({:.1}% of fitted ICs)",
            100.0 * report.aggregate.modal_fraction
        ),
        None => println!("no IC produced a fit"),
    }
    println!("wrote {}", json_path.display());
    println!("wrote {}", csv_path.display());
    Ok(())
}

fn cmd_validate(config: &ExperimentConfig, r0: f64) -> Result<()> {
    let report = validate_envelope(config, r0)?;
    println!(
        "envelope vs averaged amplitude on [0, {}]: sup gap {:.6e} (allowance {:.3})",
        report.t_end, report.sup_gap, report.threshold
    );
    if report.pass {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(Error::Divergence {
            t: report.t_end,
            reason: format!(
                "envelope gap {:.6e} exceeds averaging allowance {:.3}",
                report.sup_gap, report.threshold
            ),
        })
    }
}

fn cmd_figures(config: &ExperimentConfig, r0_override: &[f64]) -> Result<()> {
    let r0s = if r0_override.is_empty() {
        config.figure_initial_amplitudes()
    } else {
        r0_override.to_vec()
    };
    for r0 in r0s {
        let files = emit_figure_data(config, r0)?;
        println!(
            "r0 = {r0}: best n = {} -> {}, {}",
            files.selection.best.n,
            files.csv.display(),
            files.json.display()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Average { config } => cmd_average(&load_config(&config)?),
        Command::Cycles { config } => cmd_cycles(&load_config(&config)?),
        Command::Decay { config, r0 } => cmd_decay(&load_config(&config)?, r0),
        Command::Sweep {
            config,
            seed,
            threads,
        } => {
            let mut config = load_config(&config)?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            cmd_sweep(&config, threads)
        }
        Command::Validate { config, r0 } => cmd_validate(&load_config(&config)?, r0),
        Command::Figures { config, r0 } => cmd_figures(&load_config(&config)?, &r0),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
