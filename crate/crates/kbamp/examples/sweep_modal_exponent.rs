//! Random-initial-condition sweep: integrate and fit a batch of decays and
//! tabulate which exponent index wins. A trimmed-down version of the full
//! preset experiment (200 initial amplitudes instead of 1000).
//!
//! ```bash
//! cargo run --release --example sweep_modal_exponent
//! ```

use kbamp::runner::{preset, run_sweep};

fn main() -> kbamp::Result<()> {
    for name in ["vdp-mono", "vdp-bi", "rayleigh-mono", "rayleigh-bi"] {
        let mut config = preset(name).unwrap();
        config.ic_count = 200;
        let report = run_sweep(&config)?;
        println!(
            "{name}: {} ICs in ({}, {}), seed {}",
            config.ic_count, config.ic_interval.0, config.ic_interval.1, config.seed
        );
        for (n, count) in &report.aggregate.histogram {
            let bar = "#".repeat(60 * count / config.ic_count);
            println!("  n = {n}: {count:>4} {bar}");
        }
        match report.aggregate.modal_n {
            Some(n) => println!(
                "  modal n = {n} ({:.1}% of fitted ICs)\n",
                100.0 * report.aggregate.modal_fraction
            ),
            None => println!("  no fits succeeded\n"),
        }
    }
    Ok(())
}
