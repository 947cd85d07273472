//! Lanczos against full diagonalization, and the Schmidt spectrum against an
//! explicit partial trace, for a small spin-3/2 chain.

use qcrit::entanglement::{block_probabilities, block_rdm_dense};
use qcrit::lanczos::{dense_spectrum, ground_state, ground_state_dense, LanczosConfig};
use qcrit::spin::ChainSpec;

fn main() -> qcrit::Result<()> {
    let spec = ChainSpec::nnn(3, 4);
    let lambda = 0.46;
    let lanczos = ground_state(&spec, lambda, &LanczosConfig::default())?;
    let dense = ground_state_dense(&spec, lambda)?;
    let spectrum = dense_spectrum(&spec, lambda)?;
    println!("lowest levels: {:?}", &spectrum[..4]);
    println!("Lanczos E0 = {:.14} ({} iterations)", lanczos.energy, lanczos.iterations);
    println!("dense   E0 = {:.14}", dense.energy);

    let p = block_probabilities(&lanczos.vector, &spec, 2)?;
    let mut rho: Vec<f64> = block_rdm_dense(&dense.vector, &spec, 2)?
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    rho.sort_by(|a, b| b.total_cmp(a));
    for (a, b) in p.as_slice().iter().zip(&rho).take(5) {
        println!("p = {a:.12}   partial trace = {b:.12}");
    }
    Ok(())
}
