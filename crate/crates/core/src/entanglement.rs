//! Schmidt spectra, block probabilities and single-site reduced density
//! matrices of a pure state.
//!
//! Blocks are the leftmost `L` sites, so the bipartition is the row-major
//! reshape of the amplitudes into a `(2S+1)^L × (2S+1)^(N-L)` matrix. Schmidt
//! coefficients are its singular values, computed directly by SVD rather
//! than as square roots of Gram-matrix eigenvalues: the Gram route squares
//! the condition number and buries every coefficient below ~1e-8 in
//! round-off, which the small-q entropies then amplify.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{ChainSpec, StateVector};

/// Eigenvalues in `[-CLIP_ERROR, 0)` are treated as round-off and set to zero.
pub const CLIP_ERROR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    /// Descending, non-negative.
    pub coefficients: Vec<f64>,
    pub block_size: usize,
    pub chain_size: usize,
}

impl SchmidtSpectrum {
    pub fn probabilities(&self) -> Result<ProbabilityVector> {
        ProbabilityVector::from_weights(self.coefficients.iter().map(|s| s * s).collect())
    }
}

/// Probabilities in descending order summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates an already-normalized vector (`p_i >= 0`, `Σp = 1 ± 1e-10`).
    pub fn new(mut p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::Domain("empty probability vector".into()));
        }
        if let Some(bad) = p.iter().find(|x| !(**x >= 0.0) || !x.is_finite()) {
            return Err(Error::Domain(format!("invalid probability {bad}")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("probabilities sum to {total}")));
        }
        p.sort_by(|a, b| b.total_cmp(a));
        Ok(ProbabilityVector(p))
    }

    /// Applies the clipping policy to raw spectral weights and renormalizes.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if let Some(&worst) = weights.iter().min_by(|a, b| a.total_cmp(b)) {
            if worst < -CLIP_ERROR || !worst.is_finite() {
                return Err(Error::NonPhysicalRdm(worst));
            }
        }
        let clipped: Vec<f64> = weights.into_iter().map(|w| w.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        if !(total > 0.0) {
            return Err(Error::Domain("spectrum has zero weight".into()));
        }
        Self::new(clipped.into_iter().map(|w| w / total).collect())
    }

    /// Uniform distribution over `d` outcomes.
    pub fn uniform(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("empty probability vector".into()));
        }
        Ok(ProbabilityVector(vec![1.0 / d as f64; d]))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True when a single outcome carries all weight.
    pub fn is_pure(&self) -> bool {
        self.0[0] >= 1.0 - 1e-10
    }
}

/// A reduced density matrix: real symmetric, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct Rdm {
    entries: DMatrix<f64>,
}

impl Rdm {
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::Domain("reduced density matrix must be square".into()));
        }
        let trace = entries.trace();
        if (trace - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("trace {trace} is not 1")));
        }
        let asym = (&entries - entries.transpose()).abs().max();
        if asym > 1e-12 {
            return Err(Error::Domain(format!("matrix is not symmetric ({asym:e})")));
        }
        Ok(Rdm { entries })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.entries.component_mul(&self.entries).sum()
    }
}

fn block_dims(spec: &ChainSpec, block: usize) -> Result<(usize, usize)> {
    let n = spec.n_sites;
    if block == 0 || block >= n {
        return Err(Error::InvalidBlock {
            block,
            max: n.saturating_sub(1),
        });
    }
    let d = spec.local_dim();
    Ok((d.pow(block as u32), d.pow((n - block) as u32)))
}

fn check_state(state: &StateVector, spec: &ChainSpec) -> Result<()> {
    let dim = crate::spin::hilbert_dimension(spec)?;
    if state.len() != dim {
        return Err(Error::Shape {
            expected: dim,
            actual: state.len(),
        });
    }
    Ok(())
}

/// Schmidt coefficients across the cut after the leftmost `block` sites.
pub fn schmidt_spectrum(
    state: &StateVector,
    spec: &ChainSpec,
    block: usize,
) -> Result<SchmidtSpectrum> {
    check_state(state, spec)?;
    let (rows, cols) = block_dims(spec, block)?;
    let amps = state.amplitudes();
    // nalgebra is column-major: reading the row-major data column-wise gives
    // the transpose, which has the same singular values.
    let tall = if rows >= cols {
        DMatrix::from_row_slice(rows, cols, amps)
    } else {
        DMatrix::from_column_slice(cols, rows, amps)
    };
    let mut coefficients: Vec<f64> = tall.singular_values().iter().copied().collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum {
        coefficients,
        block_size: block,
        chain_size: spec.n_sites,
    })
}

/// `p_i = σ_i²` for the leftmost-`block` bipartition.
pub fn block_probabilities(
    state: &StateVector,
    spec: &ChainSpec,
    block: usize,
) -> Result<ProbabilityVector> {
    schmidt_spectrum(state, spec, block)?.probabilities()
}

/// `ρ_ab = Σ_rest ψ(a, rest) ψ(b, rest)` for one site.
pub fn single_site_rdm(state: &StateVector, spec: &ChainSpec, site: usize) -> Result<Rdm> {
    check_state(state, spec)?;
    let n = spec.n_sites;
    if site >= n {
        return Err(Error::InvalidSite { site, n_sites: n });
    }
    let d = spec.local_dim();
    let inner = d.pow((n - 1 - site) as u32);
    let outer = d.pow(site as u32);
    let amps = state.amplitudes();
    let mut rho = DMatrix::<f64>::zeros(d, d);
    for hi in 0..outer {
        let base = hi * d * inner;
        for a in 0..d {
            let ra = &amps[base + a * inner..base + (a + 1) * inner];
            for b in a..d {
                let rb = &amps[base + b * inner..base + (b + 1) * inner];
                let s: f64 = ra.iter().zip(rb).map(|(x, y)| x * y).sum();
                rho[(a, b)] += s;
            }
        }
    }
    for a in 0..d {
        for b in 0..a {
            rho[(a, b)] = rho[(b, a)];
        }
    }
    Rdm::new(rho)
}

/// Default single-site target: the central site `⌊N/2⌋`.
pub fn central_site(spec: &ChainSpec) -> usize {
    spec.n_sites / 2
}

/// Eigenvalues of `rdm` under the clipping policy, descending.
pub fn rdm_probabilities(rdm: &Rdm) -> Result<ProbabilityVector> {
    let eig = rdm.entries.clone().symmetric_eigenvalues();
    ProbabilityVector::from_weights(eig.iter().copied().collect())
}

/// Brute-force `ρ_A = Tr_B |ψ⟩⟨ψ|` for the leftmost `block` sites, by explicit
/// summation over the traced configurations. Oracle for the SVD route.
pub fn block_rdm_dense(state: &StateVector, spec: &ChainSpec, block: usize) -> Result<DMatrix<f64>> {
    check_state(state, spec)?;
    let (rows, cols) = block_dims(spec, block)?;
    let amps = state.amplitudes();
    let mut rho = DMatrix::<f64>::zeros(rows, rows);
    for a in 0..rows {
        for b in 0..rows {
            let mut s = 0.0;
            for r in 0..cols {
                s += amps[a * cols + r] * amps[b * cols + r];
            }
            rho[(a, b)] = s;
        }
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lanczos::{ground_state, ground_state_dense, LanczosConfig};

    fn bell() -> (ChainSpec, StateVector) {
        let spec = ChainSpec::nn(1, 2);
        let r = 0.5f64.sqrt();
        (spec, StateVector::new(&spec, vec![r, 0.0, 0.0, r]).unwrap())
    }

    fn ghz3() -> (ChainSpec, StateVector) {
        let spec = ChainSpec::nn(1, 3);
        let mut v = vec![0.0; 8];
        v[0] = 0.5f64.sqrt();
        v[7] = 0.5f64.sqrt();
        (spec, StateVector::new(&spec, v).unwrap())
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn bell_and_ghz_spectra() {
        let r = 0.5f64.sqrt();
        let (spec, s) = bell();
        let sp = schmidt_spectrum(&s, &spec, 1).unwrap();
        assert!(close(&sp.coefficients, &[r, r], 1e-15));
        let p = block_probabilities(&s, &spec, 1).unwrap();
        assert!(close(p.as_slice(), &[0.5, 0.5], 1e-15));

        let (spec, s) = ghz3();
        let sp = schmidt_spectrum(&s, &spec, 1).unwrap();
        assert!(close(&sp.coefficients, &[r, r], 1e-15));
    }

    #[test]
    fn product_state_has_rank_one() {
        let spec = ChainSpec::nn(3, 4);
        let s = StateVector::product(&spec, &[0, 3, 1, 2]).unwrap();
        for l in 1..4 {
            let sp = schmidt_spectrum(&s, &spec, l).unwrap();
            assert!((sp.coefficients[0] - 1.0).abs() < 1e-15);
            assert!(sp.coefficients[1..].iter().all(|&c| c < 1e-15));
            assert_eq!(sp.coefficients.len(), 4usize.pow(l.min(4 - l) as u32));
        }
    }

    #[test]
    fn block_out_of_range() {
        let (spec, s) = bell();
        assert!(matches!(
            schmidt_spectrum(&s, &spec, 0),
            Err(Error::InvalidBlock { .. })
        ));
        assert!(matches!(
            schmidt_spectrum(&s, &spec, 2),
            Err(Error::InvalidBlock { .. })
        ));
        assert!(matches!(
            single_site_rdm(&s, &spec, 2),
            Err(Error::InvalidSite { .. })
        ));
    }

    #[test]
    fn bell_single_site() {
        let (spec, s) = bell();
        let rdm = single_site_rdm(&s, &spec, 0).unwrap();
        assert!((rdm.entries() - DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 0.5])).abs().max() < 1e-15);
        let p = rdm_probabilities(&rdm).unwrap();
        assert!(close(p.as_slice(), &[0.5, 0.5], 1e-15));
    }

    #[test]
    fn paramagnet_single_site_is_pure() {
        let spec = ChainSpec::nn(3, 5);
        let gs = ground_state(&spec, 0.0, &LanczosConfig::default()).unwrap();
        for site in 0..5 {
            let rdm = single_site_rdm(&gs.vector, &spec, site).unwrap();
            assert!((rdm.purity() - 1.0).abs() < 1e-10);
            let p = rdm_probabilities(&rdm).unwrap();
            assert!(p.is_pure());
        }
        for l in 1..5 {
            assert!(block_probabilities(&gs.vector, &spec, l).unwrap().is_pure());
        }
    }

    #[test]
    fn two_site_critical_point_against_partial_trace() {
        let spec = ChainSpec::nn(1, 2);
        let gs = ground_state_dense(&spec, 1.0).unwrap();
        let rho = block_rdm_dense(&gs.vector, &spec, 1).unwrap();
        let mut want: Vec<f64> = rho.symmetric_eigenvalues().iter().copied().collect();
        want.sort_by(|a, b| b.total_cmp(a));
        let got = block_probabilities(&gs.vector, &spec, 1).unwrap();
        assert!(close(got.as_slice(), &want, 1e-12));
        let site = rdm_probabilities(&single_site_rdm(&gs.vector, &spec, 0).unwrap()).unwrap();
        assert!(close(site.as_slice(), &want, 1e-12));
        assert!((single_site_rdm(&gs.vector, &spec, 0).unwrap().entries() - &rho).abs().max() < 1e-12);
    }

    #[test]
    fn clipping_policy() {
        let p = ProbabilityVector::from_weights(vec![1.0, -3e-12]).unwrap();
        assert_eq!(p.as_slice(), &[1.0, 0.0]);
        assert!(matches!(
            ProbabilityVector::from_weights(vec![1.0, -1e-7]),
            Err(Error::NonPhysicalRdm(_))
        ));
        let rank_one = Rdm::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        assert!(rdm_probabilities(&rank_one).unwrap().is_pure());
    }

    #[test]
    fn rdm_validation() {
        assert!(Rdm::new(DMatrix::from_row_slice(2, 2, &[0.6, 0.0, 0.0, 0.6])).is_err());
        assert!(Rdm::new(DMatrix::from_row_slice(2, 2, &[0.5, 0.1, 0.0, 0.5])).is_err());
    }

    #[test]
    fn bipartition_symmetry_for_reflection_symmetric_ground_state() {
        let spec = ChainSpec::nn(1, 10);
        let gs = ground_state(&spec, 1.0, &LanczosConfig::default()).unwrap();
        for l in 1..10 {
            let a = block_probabilities(&gs.vector, &spec, l).unwrap();
            let b = block_probabilities(&gs.vector, &spec, 10 - l).unwrap();
            // the two largest values are well above round-off
            assert!((a.as_slice()[0] - b.as_slice()[0]).abs() < 1e-10);
            assert!((a.as_slice()[1] - b.as_slice()[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn normalization_of_schmidt_coefficients() {
        let spec = ChainSpec::nnn(1, 9);
        let gs = ground_state(&spec, 0.9, &LanczosConfig::default()).unwrap();
        for l in 1..9 {
            let sp = schmidt_spectrum(&gs.vector, &spec, l).unwrap();
            let total: f64 = sp.coefficients.iter().map(|s| s * s).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }
}
