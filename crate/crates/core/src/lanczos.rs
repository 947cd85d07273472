//! Ground states by matrix-free Lanczos, with a dense oracle for small chains.
//!
//! The solver starts from the normalized all-ones vector. Full
//! reorthogonalization keeps every Krylov vector in memory; when that would
//! exceed the configured budget the solver switches to a streamed two-pass
//! scheme that stores only the three-term recurrence and regenerates the
//! basis to assemble the Ritz vector.
//!
//! The gap estimate comes from a second, deflated Lanczos run started from a
//! fixed pseudo-random vector orthogonal to the ground state. A Krylov space
//! grown from the all-ones vector never leaves the spin-flip-symmetric
//! sector, so its own tridiagonal spectrum cannot see the ferromagnetic
//! doublet partner.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{
    dense_hamiltonian_with, hilbert_dimension, ChainHamiltonian, ChainSpec, Couplings,
    StateVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reorthogonalization {
    /// Every new vector is orthogonalized against the whole stored basis.
    Full,
    /// Streamed two-pass Lanczos: only the restart vector is kept for
    /// reorthogonalization; the basis is regenerated to build the Ritz vector.
    Selective,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LanczosConfig {
    pub max_krylov: usize,
    /// Absolute bound on `‖Hv - Ev‖`.
    pub tol: f64,
    pub reorthogonalization: Reorthogonalization,
    /// Byte budget for the stored Krylov basis; `Full` falls back to
    /// `Selective` above it.
    pub memory_budget: usize,
    /// Restarts from the current Ritz vector before giving up.
    pub max_restarts: usize,
    /// Relative gap below which the ground state is flagged degenerate.
    pub degeneracy_tol: f64,
    /// Run the deflated second solve that produces `gap_estimate`.
    pub estimate_gap: bool,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        LanczosConfig {
            max_krylov: 300,
            tol: 1e-12,
            reorthogonalization: Reorthogonalization::Full,
            memory_budget: 1 << 30,
            max_restarts: 6,
            degeneracy_tol: 1e-8,
            estimate_gap: true,
        }
    }
}

impl LanczosConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_krylov < 2 {
            return Err(Error::InvalidInput(format!(
                "max_krylov must be >= 2, got {}",
                self.max_krylov
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol must be > 0, got {}", self.tol)));
        }
        Ok(())
    }

    /// Mode actually used for a problem of dimension `dim`.
    pub fn effective_mode(&self, dim: usize) -> Reorthogonalization {
        let needed = (self.max_krylov.min(dim) + 1)
            .saturating_mul(dim)
            .saturating_mul(std::mem::size_of::<f64>());
        match self.reorthogonalization {
            Reorthogonalization::Full if needed <= self.memory_budget => Reorthogonalization::Full,
            _ => Reorthogonalization::Selective,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroundState {
    pub energy: f64,
    pub vector: StateVector,
    pub residual: f64,
    pub iterations: usize,
    /// `E1 - E0`; infinite for a one-dimensional space.
    pub gap_estimate: f64,
    pub degenerate: bool,
    pub mode: Reorthogonalization,
}

// Fixed-size chunks keep reductions independent of the thread count.
const REDUCE_CHUNK: usize = 1 << 14;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    if a.len() <= REDUCE_CHUNK {
        return a.iter().zip(b).map(|(x, y)| x * y).sum();
    }
    let partial: Vec<f64> = a
        .par_chunks(REDUCE_CHUNK)
        .zip(b.par_chunks(REDUCE_CHUNK))
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>())
        .collect();
    partial.iter().sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `y += alpha * x`
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.par_iter_mut()
        .with_min_len(REDUCE_CHUNK)
        .zip(x.par_iter())
        .for_each(|(yi, xi)| *yi += alpha * xi);
}

fn scale(alpha: f64, x: &mut [f64]) {
    x.par_iter_mut()
        .with_min_len(REDUCE_CHUNK)
        .for_each(|xi| *xi *= alpha);
}

/// Two rounds of classical Gram-Schmidt against `against`.
fn orthogonalize(w: &mut [f64], against: &[&[f64]]) {
    for _ in 0..2 {
        for v in against {
            let c = dot(v, w);
            axpy(-c, v, w);
        }
    }
}

/// Lowest eigenpair of the symmetric tridiagonal matrix `(alpha, beta)`.
fn tridiagonal_lowest(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i == j + 1 {
            beta[j]
        } else if j == i + 1 {
            beta[i]
        } else {
            0.0
        }
    });
    let eig = t.symmetric_eigen();
    let k = eig.eigenvalues.imin();
    let y = eig.eigenvectors.column(k).iter().copied().collect();
    (eig.eigenvalues[k], y)
}

struct Outcome {
    energy: f64,
    vector: Vec<f64>,
    residual: f64,
    iterations: usize,
    converged: bool,
}

struct Krylov<'a> {
    op: &'a ChainHamiltonian,
    deflate: &'a [&'a [f64]],
    tol: f64,
    max_krylov: usize,
    max_restarts: usize,
}

impl Krylov<'_> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn matvec(&self, v: &[f64], out: &mut [f64]) {
        self.op
            .apply_into(v, out)
            .expect("krylov vectors have the operator dimension");
    }

    fn true_residual(&self, energy: f64, x: &[f64]) -> f64 {
        let mut hx = vec![0.0; self.dim()];
        self.matvec(x, &mut hx);
        axpy(-energy, x, &mut hx);
        norm(&hx)
    }

    fn should_check(j: usize) -> bool {
        j < 12 || j % 4 == 3
    }

    fn breakdown(beta: f64, alpha: f64) -> bool {
        beta <= 1e-14 * alpha.abs().max(1.0)
    }

    fn solve(&self, start: Vec<f64>, mode: Reorthogonalization) -> Outcome {
        let mut x = start;
        let mut total = 0;
        let mut best: Option<Outcome> = None;
        for _ in 0..=self.max_restarts {
            let out = match mode {
                Reorthogonalization::Full => self.pass_full(&x),
                Reorthogonalization::Selective => self.pass_streamed(&x),
            };
            total += out.iterations;
            if out.converged {
                return Outcome {
                    iterations: total,
                    ..out
                };
            }
            x = out.vector.clone();
            if best.as_ref().map_or(true, |b| out.residual < b.residual) {
                best = Some(out);
            }
        }
        let best = best.expect("at least one pass");
        Outcome {
            iterations: total,
            ..best
        }
    }

    fn prepare_start(&self, start: &[f64]) -> Vec<f64> {
        let mut q = start.to_vec();
        orthogonalize(&mut q, self.deflate);
        let nq = norm(&q);
        scale(1.0 / nq, &mut q);
        q
    }

    fn finish(&self, energy: f64, mut x: Vec<f64>, iterations: usize) -> Outcome {
        orthogonalize(&mut x, self.deflate);
        let nx = norm(&x);
        scale(1.0 / nx, &mut x);
        let residual = self.true_residual(energy, &x);
        Outcome {
            energy,
            vector: x,
            residual,
            iterations,
            converged: residual <= self.tol,
        }
    }

    fn pass_full(&self, start: &[f64]) -> Outcome {
        let dim = self.dim();
        let m = self.max_krylov.min(dim.saturating_sub(self.deflate.len())).max(1);
        let mut basis: Vec<Vec<f64>> = vec![self.prepare_start(start)];
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);

        for j in 0..m {
            let mut w = vec![0.0; dim];
            self.matvec(&basis[j], &mut w);
            let a = dot(&basis[j], &w);
            axpy(-a, &basis[j], &mut w);
            if j > 0 {
                axpy(-beta[j - 1], &basis[j - 1], &mut w);
            }
            {
                let mut against: Vec<&[f64]> = self.deflate.to_vec();
                against.extend(basis.iter().map(Vec::as_slice));
                orthogonalize(&mut w, &against);
            }
            let b = norm(&w);
            alpha.push(a);
            let broke = Self::breakdown(b, a) || j + 1 == m;

            if Self::should_check(j) || broke {
                let (theta, y) = tridiagonal_lowest(&alpha, &beta);
                let estimate = b * y.last().copied().unwrap_or(0.0).abs();
                // A converged estimate with a larger true residual means the
                // Ritz vector carries round-off; the restart polishes it.
                if estimate <= 0.5 * self.tol || broke {
                    let mut x = vec![0.0; dim];
                    for (coef, q) in y.iter().zip(&basis) {
                        axpy(*coef, q, &mut x);
                    }
                    return self.finish(theta, x, j + 1);
                }
            }
            scale(1.0 / b, &mut w);
            beta.push(b);
            basis.push(w);
        }
        unreachable!("the last step always reports")
    }

    /// One recurrence step shared by both sweeps of the streamed scheme.
    /// Returns `(alpha, beta)` and leaves the next unnormalized vector in `w`.
    fn streamed_step(
        &self,
        q0: &[f64],
        prev: &[f64],
        cur: &[f64],
        beta_prev: f64,
        w: &mut [f64],
    ) -> (f64, f64) {
        self.matvec(cur, w);
        let a = dot(cur, w);
        axpy(-a, cur, w);
        axpy(-beta_prev, prev, w);
        let mut against: Vec<&[f64]> = self.deflate.to_vec();
        against.push(q0);
        orthogonalize(w, &against);
        (a, norm(w))
    }

    fn pass_streamed(&self, start: &[f64]) -> Outcome {
        let dim = self.dim();
        let m = self.max_krylov.min(dim.saturating_sub(self.deflate.len())).max(1);
        let q0 = self.prepare_start(start);

        // First sweep: recurrence coefficients only.
        let mut alpha = Vec::with_capacity(m);
        let mut beta: Vec<f64> = Vec::with_capacity(m);
        let mut prev = vec![0.0; dim];
        let mut cur = q0.clone();
        let mut w = vec![0.0; dim];
        let mut stop = None;
        for j in 0..m {
            let beta_prev = if j > 0 { beta[j - 1] } else { 0.0 };
            let (a, b) = self.streamed_step(&q0, &prev, &cur, beta_prev, &mut w);
            alpha.push(a);
            let broke = Self::breakdown(b, a) || j + 1 == m;
            if Self::should_check(j) || broke {
                let (theta, y) = tridiagonal_lowest(&alpha, &beta);
                let estimate = b * y.last().copied().unwrap_or(0.0).abs();
                if estimate <= 0.5 * self.tol || broke {
                    stop = Some((theta, y));
                    break;
                }
            }
            scale(1.0 / b, &mut w);
            beta.push(b);
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut w);
        }
        let (theta, y) = stop.unwrap_or_else(|| tridiagonal_lowest(&alpha, &beta));

        // Second sweep: regenerate the identical basis and accumulate.
        let mut x = vec![0.0; dim];
        prev.iter_mut().for_each(|p| *p = 0.0);
        cur.copy_from_slice(&q0);
        for (j, coef) in y.iter().enumerate() {
            axpy(*coef, &cur, &mut x);
            if j + 1 == y.len() {
                break;
            }
            let beta_prev = if j > 0 { beta[j - 1] } else { 0.0 };
            self.streamed_step(&q0, &prev, &cur, beta_prev, &mut w);
            scale(1.0 / beta[j], &mut w);
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut w);
        }
        self.finish(theta, x, alpha.len())
    }
}

fn fix_sign(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    let flip = if s.abs() > 1e-300 {
        s < 0.0
    } else {
        v.iter()
            .find(|x| x.abs() > 1e-300)
            .is_some_and(|x| *x < 0.0)
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn gap_start(dim: usize) -> Vec<f64> {
    // golden-ratio sequence: deterministic, no spin-flip symmetry
    (0..dim)
        .map(|i| ((i as f64 + 1.0) * 0.618_033_988_749_894_9).fract() - 0.5)
        .collect()
}

/// Ground state of `H(λ)` by Lanczos.
pub fn ground_state(spec: &ChainSpec, lambda: f64, cfg: &LanczosConfig) -> Result<GroundState> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    ground_state_with(spec, Couplings::at_lambda(spec, lambda), cfg)
}

/// Ground state at explicit couplings (e.g. the `B = 0` classical limit).
pub fn ground_state_with(
    spec: &ChainSpec,
    couplings: Couplings,
    cfg: &LanczosConfig,
) -> Result<GroundState> {
    cfg.validate()?;
    let op = ChainHamiltonian::with_couplings(spec, couplings)?;
    let dim = op.dim();
    let mode = cfg.effective_mode(dim);
    let solver = Krylov {
        op: &op,
        deflate: &[],
        tol: cfg.tol,
        max_krylov: cfg.max_krylov,
        max_restarts: cfg.max_restarts,
    };
    let start = vec![1.0; dim];
    let out = solver.solve(start, mode);
    if !out.converged {
        return Err(Error::NoConvergence {
            iterations: out.iterations,
            residual: out.residual,
        });
    }
    let mut vector = out.vector;
    fix_sign(&mut vector);

    let gap_estimate = if !cfg.estimate_gap || dim < 2 {
        f64::INFINITY
    } else {
        let deflate = [vector.as_slice()];
        let excited = Krylov {
            op: &op,
            deflate: &deflate,
            tol: (cfg.tol * 1e6).max(1e-8),
            max_krylov: cfg.max_krylov,
            max_restarts: cfg.max_restarts,
        };
        // an unconverged Ritz value is still an upper bound on E1
        excited.solve(gap_start(dim), mode).energy - out.energy
    };
    let degenerate = gap_estimate < cfg.degeneracy_tol * out.energy.abs().max(1.0);

    Ok(GroundState {
        energy: out.energy,
        vector: StateVector::new(spec, vector)?,
        residual: out.residual,
        iterations: out.iterations,
        gap_estimate,
        degenerate,
        mode,
    })
}

/// Ground state by full dense diagonalization (oracle, dimension ≤ 4096).
pub fn ground_state_dense(spec: &ChainSpec, lambda: f64) -> Result<GroundState> {
    ground_state_dense_with(spec, Couplings::at_lambda(spec, lambda))
}

pub fn ground_state_dense_with(spec: &ChainSpec, couplings: Couplings) -> Result<GroundState> {
    let h = dense_hamiltonian_with(spec, couplings)?;
    let dim = hilbert_dimension(spec)?;
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let k = order[0];
    let energy = eig.eigenvalues[k];
    let gap_estimate = if dim > 1 {
        eig.eigenvalues[order[1]] - energy
    } else {
        f64::INFINITY
    };
    let mut vector: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    fix_sign(&mut vector);
    let v = DVector::from_column_slice(&vector);
    let residual = (&h * &v - &v * energy).norm();
    let degenerate = gap_estimate < LanczosConfig::default().degeneracy_tol * energy.abs().max(1.0);
    Ok(GroundState {
        energy,
        vector: StateVector::normalized(spec, vector)?,
        residual,
        iterations: 0,
        gap_estimate,
        degenerate,
        mode: Reorthogonalization::Full,
    })
}

/// All eigenvalues of the dense Hamiltonian, ascending.
pub fn dense_spectrum(spec: &ChainSpec, lambda: f64) -> Result<Vec<f64>> {
    let h = dense_hamiltonian_with(spec, Couplings::at_lambda(spec, lambda))?;
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::{spin_operators, Boundary};

    fn overlap(a: &GroundState, b: &GroundState) -> f64 {
        dot(a.vector.amplitudes(), b.vector.amplitudes()).abs()
    }

    #[test]
    fn two_site_closed_form() {
        let gs = ground_state(&ChainSpec::nn(1, 2), 1.0, &LanczosConfig::default()).unwrap();
        assert!((gs.energy + 5f64.sqrt()).abs() < 1e-10);
        assert!(gs.residual <= 1e-12);
        assert!(!gs.degenerate);
    }

    #[test]
    fn dense_two_site_spectrum() {
        let ev = dense_spectrum(&ChainSpec::nn(1, 2), 1.0).unwrap();
        let r5 = 5f64.sqrt();
        for (got, want) in ev.iter().zip([-r5, -1.0, 1.0, r5]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn non_interacting_point() {
        for spec in [ChainSpec::nn(1, 6), ChainSpec::nn(3, 4), ChainSpec::nnn(2, 4)] {
            let ops = spin_operators(spec.two_s, spec.convention).unwrap();
            let want = -(spec.n_sites as f64) * ops.sx_max_eigenvalue();
            let gs = ground_state(&spec, 0.0, &LanczosConfig::default()).unwrap();
            assert!((gs.energy - want).abs() < 1e-10, "{spec:?}: {}", gs.energy);
            let dense = ground_state_dense(&spec, 0.0).unwrap();
            assert!((dense.energy - want).abs() < 1e-10);
        }
    }

    #[test]
    fn classical_limit_is_flagged_degenerate() {
        let spec = ChainSpec::nn(1, 4);
        let classical = Couplings {
            j1: 1.0,
            j2: 0.0,
            field: 0.0,
        };
        let gs = ground_state_with(&spec, classical, &LanczosConfig::default()).unwrap();
        assert!((gs.energy + 3.0).abs() < 1e-12);
        assert!(gs.degenerate, "gap {}", gs.gap_estimate);
    }

    #[test]
    fn lanczos_matches_dense_for_spin_half_chains() {
        let cfg = LanczosConfig::default();
        for n in 2..=10 {
            for lambda in [0.3, 1.0, 1.7] {
                let spec = ChainSpec::nn(1, n);
                let l = ground_state(&spec, lambda, &cfg).unwrap();
                let d = ground_state_dense(&spec, lambda).unwrap();
                assert!(
                    (l.energy - d.energy).abs() <= 1e-10 * d.energy.abs(),
                    "N={n} λ={lambda}: {} vs {}",
                    l.energy,
                    d.energy
                );
                if l.gap_estimate > 1e-8 {
                    assert!(overlap(&l, &d) >= 1.0 - 1e-8);
                }
            }
        }
    }

    #[test]
    fn streamed_mode_agrees_with_full() {
        let spec = ChainSpec::nnn(1, 10);
        let full = ground_state(&spec, 1.1, &LanczosConfig::default()).unwrap();
        let cfg = LanczosConfig {
            reorthogonalization: Reorthogonalization::Selective,
            ..LanczosConfig::default()
        };
        let streamed = ground_state(&spec, 1.1, &cfg).unwrap();
        assert_eq!(streamed.mode, Reorthogonalization::Selective);
        assert!((full.energy - streamed.energy).abs() < 1e-10 * full.energy.abs());
        assert!(overlap(&full, &streamed) > 1.0 - 1e-10);
        assert!((full.gap_estimate - streamed.gap_estimate).abs() < 1e-6);
    }

    #[test]
    fn budget_forces_streamed_mode() {
        let cfg = LanczosConfig {
            memory_budget: 1024,
            ..LanczosConfig::default()
        };
        assert_eq!(cfg.effective_mode(1 << 10), Reorthogonalization::Selective);
        assert_eq!(
            LanczosConfig::default().effective_mode(1 << 10),
            Reorthogonalization::Full
        );
    }

    #[test]
    fn tiny_krylov_budget_fails_to_converge() {
        let cfg = LanczosConfig {
            max_krylov: 3,
            max_restarts: 0,
            ..LanczosConfig::default()
        };
        let err = ground_state(&ChainSpec::nn(1, 10), 1.0, &cfg).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn deterministic_energies() {
        let spec = ChainSpec::nn(3, 5).with_boundary(Boundary::Periodic);
        let cfg = LanczosConfig::default();
        let a = ground_state(&spec, 0.5, &cfg).unwrap();
        let b = ground_state(&spec, 0.5, &cfg).unwrap();
        assert_eq!(a.energy, b.energy);
        assert_eq!(a.vector, b.vector);
    }

    #[test]
    fn invalid_config() {
        let cfg = LanczosConfig {
            max_krylov: 1,
            ..LanczosConfig::default()
        };
        assert!(ground_state(&ChainSpec::nn(1, 3), 1.0, &cfg).is_err());
        assert!(ground_state(&ChainSpec::nn(1, 3), -1.0, &LanczosConfig::default()).is_err());
    }
}
