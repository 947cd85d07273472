//! Ground state of a transverse-field Ising chain by Lanczos.
//!
//! ```bash
//! cargo run --release --example ground_state -- 14 1.0
//! ```

use std::time::Instant;

use qcrit::lanczos::{ground_state, LanczosConfig};
use qcrit::spin::{hilbert_dimension, ChainSpec};

fn main() -> qcrit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(12);
    let lambda: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(1.0);

    let spec = ChainSpec::nn(1, n);
    let start = Instant::now();
    let gs = ground_state(&spec, lambda, &LanczosConfig::default())?;
    println!("N = {n}, dim = {}, lambda = {lambda}", hilbert_dimension(&spec)?);
    println!("E0        = {:.12}", gs.energy);
    println!("E0 / N    = {:.12}", gs.energy / n as f64);
    println!("gap       = {:.3e}", gs.gap_estimate);
    println!("residual  = {:.3e}", gs.residual);
    println!("iterations = {} ({:?})", gs.iterations, gs.mode);
    println!("degenerate = {}", gs.degenerate);
    println!("elapsed   = {:.3} s", start.elapsed().as_secs_f64());
    Ok(())
}
