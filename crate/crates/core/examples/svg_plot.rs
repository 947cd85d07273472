//! Runs a configured sweep and renders its Γ curves to SVG.
//!
//! ```bash
//! cargo run --release --example svg_plot -- /tmp/qcrit-plot
//! ```

use qcrit::runner::{parse_config, run_sweep};

fn main() -> qcrit::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "qcrit-plot".into());
    let cfg = parse_config(&format!(
        "spin=1/2\nn=10\nmodel=nn\nlambda_min=0.2\nlambda_max=2.0\nlambda_step=0.04\n\
         q_list=special,0.7,1\ntitle=Gamma_q, N = 10\nout_dir={out}\n"
    ))?;
    let art = run_sweep(&cfg)?;
    for note in &art.notes {
        println!("{note}");
    }
    if let Some(svg) = art.plot {
        println!("plot: {}", svg.display());
    }
    Ok(())
}
