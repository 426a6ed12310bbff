//! Emit plot-ready `t,r,r_hat` CSV files plus fit-table sidecars for the
//! standard decay scenarios, one file pair per initial amplitude.
//!
//! ```bash
//! cargo run --example figure_data
//! # then e.g.: python3 -c "import pandas; print(pandas.read_csv('out/vdp-bi/fig_r0_3.16.csv'))"
//! ```

use kbamp::runner::{emit_figure_data, preset};

fn main() -> kbamp::Result<()> {
    for name in ["vdp-bi", "vdp-mono", "rayleigh-bi", "rayleigh-mono"] {
        let config = preset(name).unwrap();
        println!("{name}:");
        for r0 in config.figure_initial_amplitudes() {
            let files = emit_figure_data(&config, r0)?;
            println!(
                "  r0 = {r0}: best n = {} -> {}",
                files.selection.best.n,
                files.csv.display()
            );
        }
    }
    Ok(())
}
