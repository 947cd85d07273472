//! `1/Γ_q` against `(1/ln_q N)^a_q`, extrapolated to `N → ∞`.
//!
//! Γ is taken at the critical coupling of the periodic chain. Pass `peak` to
//! use each length's own Γ maximum instead.
//!
//! ```bash
//! cargo run --release --example finite_size_extrapolation
//! cargo run --release --example finite_size_extrapolation -- peak
//! ```

use qcrit::entropy::{gamma_at, gamma_at_peak, lambda_grid, EntanglementTarget, SweepOptions, Q_SPECIAL_ISING};
use qcrit::scaling::{fit_gamma_extrapolation, GammaLimit};
use qcrit::spin::{Boundary, ChainSpec};

fn main() -> qcrit::Result<()> {
    let peak = std::env::args().nth(1).as_deref() == Some("peak");
    let opts = SweepOptions::default();
    let grid = lambda_grid(0.2, 2.0, 0.02)?;

    for q in [Q_SPECIAL_ISING, 1.0] {
        let mut points = Vec::new();
        for n in (4..=12).step_by(2) {
            let spec = if peak { ChainSpec::nn(1, n) } else { ChainSpec::nn(1, n).with_boundary(Boundary::Periodic) };
            let target = EntanglementTarget::central_site(&spec);
            let g = if peak {
                gamma_at_peak(&spec, &grid, &[q], target, &opts)?.gamma[0]
            } else {
                gamma_at(&spec, 1.0, 0.02, &[q], target, &opts.lanczos)?[0]
            };
            points.push((n, g));
        }
        let fit = fit_gamma_extrapolation(&points, q)?;
        println!("q = {q:.4}");
        for ((n, g), x) in points.iter().zip(&fit.abscissa) {
            println!("  N = {n:>2}  Gamma = {g:.6}  x = {x:.6}");
        }
        let limit = match fit.gamma_infinity {
            GammaLimit::Finite(g) => format!("{g:.4}"),
            GammaLimit::Divergent => "divergent".into(),
        };
        println!(
            "  a_q = {:.2}, intercept = {:.4} +/- {:.4}, r^2 = {:.5}, Gamma(N -> inf) = {limit}",
            fit.a_q, fit.intercept, fit.intercept_stderr, fit.r_squared
        );
    }
    Ok(())
}
