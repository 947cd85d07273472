//! Dense-oracle comparisons over every small chain.

use nalgebra::DMatrix;

use crate::entanglement::{self, block_rdm_dense};
use crate::error::Result;
use crate::lanczos::{self, LanczosConfig};
use crate::spin::{
    apply_hamiltonian, dense_hamiltonian, hilbert_dimension, Boundary, ChainSpec, Convention, Coupling,
    StateVector,
};

/// Largest Hilbert dimension enumerated.
pub const ORACLE_MAX_DIM: usize = 1024;
/// Largest `2S` enumerated.
pub const ORACLE_MAX_TWO_S: u32 = 7;
const ORACLE_LAMBDA: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleThresholds {
    pub matvec: f64,
    /// Relative to `1 + |E|`.
    pub energy: f64,
    /// On `1 - |⟨v, v_dense⟩|`, checked only for a resolved gap.
    pub vector: f64,
    pub spectra: f64,
}

impl Default for OracleThresholds {
    fn default() -> Self {
        OracleThresholds {
            matvec: 1e-12,
            energy: 1e-10,
            vector: 1e-8,
            spectra: 1e-12,
        }
    }
}

impl OracleThresholds {
    pub fn uniform(tol: f64) -> Self {
        OracleThresholds {
            matvec: tol,
            energy: tol,
            vector: tol,
            spectra: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleCase {
    pub spec: ChainSpec,
    pub lambda: f64,
}

impl OracleCase {
    pub fn model_name(&self) -> &'static str {
        match self.spec.coupling {
            Coupling::NearestNeighbor => "nn",
            Coupling::NextNearestNeighbor { .. } => "nnn",
        }
    }

    pub fn boundary_name(&self) -> &'static str {
        match self.spec.boundary {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }

    pub fn convention_name(&self) -> &'static str {
        match self.spec.convention {
            Convention::PauliScaled => "pauli",
            Convention::Raw => "raw",
        }
    }

    pub fn label(&self) -> String {
        format!(
            "2S={} N={} {} {} {}",
            self.spec.two_s,
            self.spec.n_sites,
            self.model_name(),
            self.boundary_name(),
            self.convention_name()
        )
    }
}

/// Every chain with `2S ≤ 7` and dimension ≤ 1024, across both couplings,
/// boundaries and conventions.
pub fn oracle_cases() -> Vec<OracleCase> {
    let mut out = Vec::new();
    for two_s in 1..=ORACLE_MAX_TWO_S {
        for nnn in [false, true] {
            for boundary in [Boundary::Open, Boundary::Periodic] {
                for convention in [Convention::PauliScaled, Convention::Raw] {
                    let mut n = if nnn { 3 } else { 2 };
                    loop {
                        let base = if nnn { ChainSpec::nnn(two_s, n) } else { ChainSpec::nn(two_s, n) };
                        let spec = base.with_boundary(boundary).with_convention(convention);
                        match hilbert_dimension(&spec) {
                            Ok(d) if d <= ORACLE_MAX_DIM => out.push(OracleCase {
                                spec,
                                lambda: ORACLE_LAMBDA,
                            }),
                            _ => break,
                        }
                        n += 1;
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct CheckResult {
    pub check: &'static str,
    pub error: f64,
    pub threshold: f64,
    pub pass: bool,
}

fn result(check: &'static str, error: f64, threshold: f64) -> CheckResult {
    CheckResult {
        check,
        error,
        threshold,
        pass: error <= threshold,
    }
}

/// Single-site RDM by visiting every basis index.
fn site_rdm_brute_force(state: &StateVector, spec: &ChainSpec, site: usize) -> DMatrix<f64> {
    let d = spec.local_dim();
    let stride = d.pow((spec.n_sites - 1 - site) as u32);
    let amps = state.amplitudes();
    let mut rho = DMatrix::zeros(d, d);
    for (i, &ai) in amps.iter().enumerate() {
        let a = (i / stride) % d;
        for b in 0..d {
            let j = i + b * stride - a * stride;
            rho[(a, b)] += ai * amps[j];
        }
    }
    rho
}

fn sorted_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub(crate) fn run_case(case: &OracleCase, t: &OracleThresholds) -> Result<Vec<CheckResult>> {
    let spec = &case.spec;
    let dim = hilbert_dimension(spec)?;
    let dense = dense_hamiltonian(spec, case.lambda)?;
    let mut out = Vec::new();

    let mut matvec = 0.0f64;
    let mut e = vec![0.0; dim];
    for j in 0..dim {
        e[j] = 1.0;
        let col = apply_hamiltonian(spec, case.lambda, &e)?;
        e[j] = 0.0;
        for (i, v) in col.iter().enumerate() {
            matvec = matvec.max((v - dense[(i, j)]).abs());
        }
    }
    out.push(result("matvec", matvec, t.matvec));

    let exact = lanczos::ground_state_dense(spec, case.lambda)?;
    match lanczos::ground_state(spec, case.lambda, &LanczosConfig::default()) {
        Ok(gs) => {
            out.push(result(
                "energy",
                (gs.energy - exact.energy).abs() / (1.0 + exact.energy.abs()),
                t.energy,
            ));
            if exact.gap_estimate > 1e-8 {
                let overlap: f64 = gs
                    .vector
                    .amplitudes()
                    .iter()
                    .zip(exact.vector.amplitudes())
                    .map(|(a, b)| a * b)
                    .sum();
                out.push(result("vector", 1.0 - overlap.abs(), t.vector));
            }
        }
        Err(_) => out.push(result("energy", f64::INFINITY, t.energy)),
    }

    if spec.two_s == 1
        && spec.n_sites == 2
        && spec.coupling == Coupling::NearestNeighbor
        && spec.boundary == Boundary::Open
        && spec.convention == Convention::PauliScaled
        && case.lambda == 1.0
    {
        out.push(result("closed_form", (exact.energy + 5f64.sqrt()).abs(), t.energy));
    }

    let state = &exact.vector;
    let mut schmidt = 0.0f64;
    for l in 1..spec.n_sites {
        let p = entanglement::block_probabilities(state, spec, l)?;
        let want = sorted_eigenvalues(block_rdm_dense(state, spec, l)?);
        let mut got = p.as_slice().to_vec();
        got.resize(want.len(), 0.0);
        schmidt = schmidt.max(max_diff(&got, &want));
    }
    out.push(result("schmidt", schmidt, t.spectra));

    let mut site = 0.0f64;
    for s in 0..spec.n_sites {
        let want = site_rdm_brute_force(state, spec, s);
        let rdm = entanglement::single_site_rdm(state, spec, s)?;
        site = site.max((rdm.entries() - &want).abs().max());
        let p = entanglement::rdm_probabilities(&rdm)?;
        site = site.max(max_diff(p.as_slice(), &sorted_eigenvalues(want)));
    }
    out.push(result("site_rdm", site, t.spectra));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_covers_every_family() {
        let cases = oracle_cases();
        assert!(cases.iter().all(|c| hilbert_dimension(&c.spec).unwrap() <= ORACLE_MAX_DIM));
        for two_s in 1..=ORACLE_MAX_TWO_S {
            assert!(cases.iter().any(|c| c.spec.two_s == two_s && c.model_name() == "nnn"));
        }
        assert_eq!(cases.iter().filter(|c| c.spec.two_s == 1 && c.model_name() == "nn").count(), 4 * 9);
    }

    #[test]
    fn two_site_case_includes_closed_form() {
        let case = OracleCase {
            spec: ChainSpec::nn(1, 2),
            lambda: 1.0,
        };
        let r = run_case(&case, &OracleThresholds::default()).unwrap();
        assert!(r.iter().any(|c| c.check == "closed_form" && c.pass));
        assert!(r.iter().all(|c| c.pass), "{r:?}");
    }

    #[test]
    fn zero_tolerance_fails() {
        let case = OracleCase {
            spec: ChainSpec::nnn(3, 4),
            lambda: 1.0,
        };
        let r = run_case(&case, &OracleThresholds::uniform(0.0)).unwrap();
        assert!(r.iter().any(|c| !c.pass));
    }
}
