//! Schmidt spectra and block entropies `S_q(L)` at the critical point, with
//! the linearity report that singles out `q_special`.
//!
//! ```bash
//! cargo run --release --example block_entropy -- 16
//! ```

use qcrit::entanglement::schmidt_spectrum;
use qcrit::entropy::{tsallis_entropy, Q_SPECIAL_ISING};
use qcrit::lanczos::{ground_state, LanczosConfig};
use qcrit::scaling::extensivity_report;
use qcrit::spin::ChainSpec;

fn main() -> qcrit::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(14);
    let spec = ChainSpec::nn(1, n);
    let gs = ground_state(&spec, 1.0, &LanczosConfig::default())?;
    let qs = [0.01, Q_SPECIAL_ISING, 0.7, 1.0];

    let mut curves: Vec<(f64, Vec<f64>)> = qs.iter().map(|&q| (q, Vec::new())).collect();
    println!("{:>3}  {:>10}  {:>10}  {:>10}  {:>10}  leading Schmidt coefficients", "L", "q=0.01", "q_special", "q=0.7", "q=1");
    for l in 1..n {
        let sp = schmidt_spectrum(&gs.vector, &spec, l)?;
        let p = sp.probabilities()?;
        print!("{l:>3}");
        for (q, values) in curves.iter_mut() {
            let s = tsallis_entropy(&p, *q)?;
            values.push(s);
            print!("  {s:>10.5}");
        }
        let lead: Vec<String> = sp.coefficients.iter().take(3).map(|c| format!("{c:.4}")).collect();
        println!("  {}", lead.join(" "));
    }

    let report = extensivity_report(&curves, n)?;
    for r in &report.records {
        println!(
            "q = {:.4}: slope {:.4}, r^2 {:.4}, mean second difference {:+.3e}",
            r.q, r.slope, r.r_squared, r.mean_second_difference
        );
    }
    println!("most linear first: {:?}", report.ordering);
    Ok(())
}
