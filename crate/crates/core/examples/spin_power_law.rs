//! `Γ_q` at the critical point for growing spin `S`, fitted to
//! `C [S(S+1)]^β`.
//!
//! Short chains keep this quick; the values are finite-size Γ, not the
//! extrapolated limit.

use qcrit::entropy::{gamma_at_peak, lambda_grid, EntanglementTarget, SweepOptions, Q_SPECIAL_ISING};
use qcrit::scaling::fit_spin_power_law;
use qcrit::spin::ChainSpec;

fn main() -> qcrit::Result<()> {
    let grid = lambda_grid(0.1, 2.0, 0.02)?;
    let mut points = Vec::new();
    for two_s in 1..=4 {
        let spec = ChainSpec::nn(two_s, 5);
        let pg = gamma_at_peak(
            &spec,
            &grid,
            &[Q_SPECIAL_ISING],
            EntanglementTarget::central_site(&spec),
            &SweepOptions::default(),
        )?;
        let s = spec.spin();
        println!(
            "S = {s:.1} ({:?}): lambda* = {:.3}, Gamma = {:.5}",
            spec.convention, pg.lambda_star, pg.gamma[0]
        );
        points.push((s, pg.gamma[0]));
    }
    let fit = fit_spin_power_law(&points)?;
    println!("C = {:.4}, beta = {:.4}, r^2 = {:.4}", fit.c, fit.beta, fit.r_squared);
    Ok(())
}
