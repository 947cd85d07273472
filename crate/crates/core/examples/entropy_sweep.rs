//! Single-site Tsallis entropy and `Γ_q = dS_q/dλ` across the transition.
//!
//! ```bash
//! cargo run --release --example entropy_sweep -- 10
//! ```

use qcrit::entropy::{
    entropy_sweep, gamma_from_curve, lambda_grid, locate_peak, EntanglementTarget, SweepOptions, Q_SPECIAL_ISING,
};
use qcrit::spin::ChainSpec;

fn main() -> qcrit::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(10);
    let spec = ChainSpec::nn(1, n);
    let grid = lambda_grid(0.2, 2.0, 0.05)?;
    let qs = [Q_SPECIAL_ISING, 0.7, 1.0];
    let target = EntanglementTarget::central_site(&spec);

    let curves = entropy_sweep(&spec, &grid, &qs, &[target], &SweepOptions::default())?;
    let gammas: Vec<_> = curves.iter().map(gamma_from_curve).collect::<Result<_, _>>()?;

    print!("{:>6}", "lambda");
    for q in qs {
        print!("  S(q={q:.3})  G(q={q:.3})");
    }
    println!();
    for (i, l) in grid.iter().enumerate() {
        print!("{l:>6.2}");
        for (c, g) in curves.iter().zip(&gammas) {
            print!("  {:>10.6}  {:>10.6}", c.values[i], g.gamma[i]);
        }
        println!();
    }
    for g in &gammas {
        let p = locate_peak(g)?;
        println!(
            "q = {:.4}: peak at lambda = {:.4}, Gamma = {:.4}{}",
            g.q,
            p.lambda,
            p.gamma,
            if p.at_boundary { " (grid edge)" } else { "" }
        );
    }
    Ok(())
}
