//! Spin operators, the product basis, and the transverse-field Ising
//! Hamiltonians with nearest- and next-nearest-neighbour couplings.
//!
//! Basis states are indexed big-endian in base `2S+1`: site 0 is the most
//! significant digit, and digit `d` at a site encodes the magnetic quantum
//! number `m = S - d`. With this ordering a block of the leftmost `L` sites
//! is a contiguous reshape of the amplitude array.
//!
//! The Hamiltonian is
//!
//! ```text
//! H = -J1 Σ Sz_i Sz_{i+1} - J2 Σ Sz_i Sz_{i+2} - B Σ Sx_i
//! ```
//!
//! with `B = 1` as the energy unit and couplings tied to the tuning
//! parameter `λ = J/B` (`J1 = λ`, `J2 = r·λ`; `J2 = 0` for the NN model).

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest Hilbert dimension accepted by [`ChainSpec::validate`]
/// (2^25 amplitudes, 256 MiB per state vector).
pub const DEFAULT_MAX_DIMENSION: usize = 1 << 25;

/// Dimension limit of the dense oracles.
pub const DENSE_LIMIT: usize = 4096;

/// Default `J2/J1` for the NNN chain.
pub const DEFAULT_NNN_RATIO: f64 = -0.32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Spin matrices multiplied by 2 (Pauli matrices for S = 1/2).
    PauliScaled,
    /// Plain spin-S matrices.
    Raw,
}

impl Convention {
    /// Pauli scaling for S = 1/2, raw matrices otherwise.
    pub fn default_for(two_s: u32) -> Self {
        if two_s == 1 {
            Convention::PauliScaled
        } else {
            Convention::Raw
        }
    }

    fn scale(self) -> f64 {
        match self {
            Convention::PauliScaled => 2.0,
            Convention::Raw => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coupling {
    NearestNeighbor,
    /// `ratio` is `J2/J1`.
    NextNearestNeighbor { ratio: f64 },
}

/// The physical model: spin magnitude, chain length, couplings, boundary
/// and operator convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub two_s: u32,
    pub n_sites: usize,
    pub coupling: Coupling,
    pub boundary: Boundary,
    pub convention: Convention,
}

impl ChainSpec {
    /// Nearest-neighbour chain with open boundaries and the default
    /// convention for this spin.
    pub fn nn(two_s: u32, n_sites: usize) -> Self {
        ChainSpec {
            two_s,
            n_sites,
            coupling: Coupling::NearestNeighbor,
            boundary: Boundary::Open,
            convention: Convention::default_for(two_s),
        }
    }

    /// Next-nearest-neighbour chain with periodic boundaries and
    /// `J2/J1 = -0.32`.
    pub fn nnn(two_s: u32, n_sites: usize) -> Self {
        ChainSpec {
            two_s,
            n_sites,
            coupling: Coupling::NextNearestNeighbor {
                ratio: DEFAULT_NNN_RATIO,
            },
            boundary: Boundary::Periodic,
            convention: Convention::default_for(two_s),
        }
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn with_n_sites(mut self, n_sites: usize) -> Self {
        self.n_sites = n_sites;
        self
    }

    /// Local dimension `2S+1`.
    pub fn local_dim(&self) -> usize {
        self.two_s as usize + 1
    }

    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with_budget(DEFAULT_MAX_DIMENSION)
    }

    pub fn validate_with_budget(&self, max_dim: usize) -> Result<()> {
        if self.two_s < 1 {
            return Err(Error::InvalidSpin(self.two_s));
        }
        if self.n_sites < 2 {
            return Err(Error::InvalidSpec(format!(
                "chain needs at least 2 sites, got {}",
                self.n_sites
            )));
        }
        if let Coupling::NextNearestNeighbor { ratio } = self.coupling {
            if self.n_sites < 3 {
                return Err(Error::InvalidSpec(format!(
                    "NNN coupling needs at least 3 sites, got {}",
                    self.n_sites
                )));
            }
            if !ratio.is_finite() {
                return Err(Error::InvalidSpec(format!("J2/J1 ratio {ratio} is not finite")));
            }
        }
        let dim = hilbert_dimension(self)?;
        if dim > max_dim {
            return Err(Error::MemoryBudget {
                dim,
                budget: max_dim,
            });
        }
        Ok(())
    }
}

/// `(2S+1)^N`, or [`Error::DimensionOverflow`] if it does not fit a `usize`.
pub fn hilbert_dimension(spec: &ChainSpec) -> Result<usize> {
    if spec.two_s < 1 {
        return Err(Error::InvalidSpin(spec.two_s));
    }
    let exp = u32::try_from(spec.n_sites).map_err(|_| Error::DimensionOverflow {
        two_s: spec.two_s,
        n_sites: spec.n_sites,
    })?;
    spec.local_dim()
        .checked_pow(exp)
        .ok_or(Error::DimensionOverflow {
            two_s: spec.two_s,
            n_sites: spec.n_sites,
        })
}

/// Single-site `Sz` and `Sx` in the product basis ordering `m = S, S-1, …, -S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub two_s: u32,
    pub convention: Convention,
    pub sz: DMatrix<f64>,
    pub sx: DMatrix<f64>,
}

impl SpinOperators {
    /// Diagonal of `sz`, indexed by basis digit.
    pub fn sz_diagonal(&self) -> Vec<f64> {
        self.sz.diagonal().iter().copied().collect()
    }

    /// Superdiagonal of `sx`: the amplitude connecting digit `a` and `a+1`.
    pub fn ladder(&self) -> Vec<f64> {
        (0..self.sx.nrows().saturating_sub(1))
            .map(|a| self.sx[(a, a + 1)])
            .collect()
    }

    /// Largest eigenvalue of `sx`, i.e. `S` (times 2 when Pauli-scaled).
    pub fn sx_max_eigenvalue(&self) -> f64 {
        self.two_s as f64 / 2.0 * self.convention.scale()
    }
}

pub fn spin_operators(two_s: u32, convention: Convention) -> Result<SpinOperators> {
    if two_s < 1 {
        return Err(Error::InvalidSpin(two_s));
    }
    let d = two_s as usize + 1;
    let s = two_s as f64 / 2.0;
    let scale = convention.scale();
    let m = |digit: usize| s - digit as f64;

    let sz = DMatrix::from_fn(d, d, |a, b| if a == b { scale * m(a) } else { 0.0 });
    let sx = DMatrix::from_fn(d, d, |a, b| {
        if a.abs_diff(b) == 1 {
            scale * 0.5 * (s * (s + 1.0) - m(a) * m(b)).sqrt()
        } else {
            0.0
        }
    });
    Ok(SpinOperators {
        two_s,
        convention,
        sz,
        sx,
    })
}

/// Coupling constants at one point of the phase diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub j1: f64,
    pub j2: f64,
    pub field: f64,
}

impl Couplings {
    /// `J1 = λ`, `J2 = r·λ` (zero for NN), `B = 1`.
    pub fn at_lambda(spec: &ChainSpec, lambda: f64) -> Self {
        let j2 = match spec.coupling {
            Coupling::NearestNeighbor => 0.0,
            Coupling::NextNearestNeighbor { ratio } => ratio * lambda,
        };
        Couplings {
            j1: lambda,
            j2,
            field: 1.0,
        }
    }
}

/// Bonds `(i, j, J)` in the order they are summed, following each model's
/// summation limits.
pub(crate) fn bonds(spec: &ChainSpec, c: &Couplings) -> Vec<(usize, usize, f64)> {
    let n = spec.n_sites;
    let periodic = spec.boundary == Boundary::Periodic;
    let mut out = Vec::new();
    let mut add_range = |dist: usize, j: f64| {
        let count = if periodic { n } else { n.saturating_sub(dist) };
        for i in 0..count {
            out.push((i, (i + dist) % n, j));
        }
    };
    add_range(1, c.j1);
    if let Coupling::NextNearestNeighbor { .. } = spec.coupling {
        add_range(2, c.j2);
    }
    out
}

/// A real amplitude vector over the `(2S+1)^N` product basis, normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<f64>,
}

impl StateVector {
    /// Wraps `amplitudes`, checking length and unit norm (within 1e-12).
    pub fn new(spec: &ChainSpec, amplitudes: Vec<f64>) -> Result<Self> {
        let dim = hilbert_dimension(spec)?;
        if amplitudes.len() != dim {
            return Err(Error::Shape {
                expected: dim,
                actual: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector { amplitudes })
    }

    /// Normalizes `amplitudes` before wrapping.
    pub fn normalized(spec: &ChainSpec, mut amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(spec, amplitudes)
    }

    /// The basis state with the given per-site digits.
    pub fn product(spec: &ChainSpec, digits: &[usize]) -> Result<Self> {
        let dim = hilbert_dimension(spec)?;
        let d = spec.local_dim();
        if digits.len() != spec.n_sites || digits.iter().any(|&x| x >= d) {
            return Err(Error::Domain(format!("invalid digits {digits:?}")));
        }
        let index = digits.iter().fold(0usize, |acc, &x| acc * d + x);
        let mut amplitudes = vec![0.0; dim];
        amplitudes[index] = 1.0;
        Ok(StateVector { amplitudes })
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }
}

const MATVEC_CHUNK: usize = 1 << 12;

/// Matrix-free Hamiltonian at fixed couplings.
#[derive(Debug, Clone)]
pub struct ChainHamiltonian {
    spec: ChainSpec,
    couplings: Couplings,
    dim: usize,
    /// `stride[s] = d^(N-1-s)`.
    strides: Vec<usize>,
    /// `(i, j, -J)` per bond.
    zz_terms: Vec<(usize, usize, f64)>,
    sz: Vec<f64>,
    /// `-B · Sx[a][a+1]`.
    hop: Vec<f64>,
}

impl ChainHamiltonian {
    pub fn new(spec: &ChainSpec, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda {lambda} is not finite")));
        }
        Self::with_couplings(spec, Couplings::at_lambda(spec, lambda))
    }

    pub fn with_couplings(spec: &ChainSpec, couplings: Couplings) -> Result<Self> {
        spec.validate()?;
        let dim = hilbert_dimension(spec)?;
        let ops = spin_operators(spec.two_s, spec.convention)?;
        let d = spec.local_dim();
        let n = spec.n_sites;
        let strides = (0..n).map(|s| d.pow((n - 1 - s) as u32)).collect();
        let zz_terms = bonds(spec, &couplings)
            .into_iter()
            .map(|(i, j, w)| (i, j, -w))
            .collect();
        let hop = ops.ladder().iter().map(|&l| -couplings.field * l).collect();
        Ok(ChainHamiltonian {
            spec: *spec,
            couplings,
            dim,
            strides,
            zz_terms,
            sz: ops.sz_diagonal(),
            hop,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn spec(&self) -> &ChainSpec {
        &self.spec
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    /// `out = H v`.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                actual: v.len(),
            });
        }
        if out.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                actual: out.len(),
            });
        }
        out.par_chunks_mut(MATVEC_CHUNK)
            .enumerate()
            .for_each(|(c, chunk)| self.apply_chunk(v, c * MATVEC_CHUNK, chunk));
        Ok(())
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    fn apply_chunk(&self, v: &[f64], start: usize, out: &mut [f64]) {
        let n = self.spec.n_sites;
        let d = self.spec.local_dim();
        let top = d - 1;
        let mut digits = vec![0usize; n];
        let mut rest = start;
        for s in (0..n).rev() {
            digits[s] = rest % d;
            rest /= d;
        }
        for (offset, slot) in out.iter_mut().enumerate() {
            let i = start + offset;
            let mut diag = 0.0;
            for &(a, b, coef) in &self.zz_terms {
                diag += coef * (self.sz[digits[a]] * self.sz[digits[b]]);
            }
            let mut acc = diag * v[i];
            for (s, &stride) in self.strides.iter().enumerate() {
                let a = digits[s];
                if a > 0 {
                    acc += self.hop[a - 1] * v[i - stride];
                }
                if a < top {
                    acc += self.hop[a] * v[i + stride];
                }
            }
            *slot = acc;

            // odometer increment, last site fastest
            for s in (0..n).rev() {
                digits[s] += 1;
                if digits[s] < d {
                    break;
                }
                digits[s] = 0;
            }
        }
    }

    /// Diagonal matrix element for basis index `i`.
    pub fn diagonal_element(&self, i: usize) -> f64 {
        let d = self.spec.local_dim();
        let digit = |s: usize| (i / self.strides[s]) % d;
        self.zz_terms
            .iter()
            .fold(0.0, |acc, &(a, b, coef)| {
                acc + coef * (self.sz[digit(a)] * self.sz[digit(b)])
            })
    }
}

/// `H(λ) v` without materializing `H`.
pub fn apply_hamiltonian(spec: &ChainSpec, lambda: f64, v: &[f64]) -> Result<Vec<f64>> {
    ChainHamiltonian::new(spec, lambda)?.apply(v)
}

/// Dense `H(λ)` assembled from Kronecker products of single-site operators.
/// Test oracle; limited to dimension [`DENSE_LIMIT`].
pub fn dense_hamiltonian(spec: &ChainSpec, lambda: f64) -> Result<DMatrix<f64>> {
    dense_hamiltonian_with(spec, Couplings::at_lambda(spec, lambda))
}

pub fn dense_hamiltonian_with(spec: &ChainSpec, couplings: Couplings) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let dim = hilbert_dimension(spec)?;
    if dim > DENSE_LIMIT {
        return Err(Error::OracleLimitExceeded {
            dim,
            limit: DENSE_LIMIT,
        });
    }
    let ops = spin_operators(spec.two_s, spec.convention)?;
    let d = spec.local_dim();
    let identity = DMatrix::<f64>::identity(d, d);
    let embed = |placed: &[(usize, &DMatrix<f64>)]| -> DMatrix<f64> {
        let mut acc = DMatrix::<f64>::identity(1, 1);
        for site in 0..spec.n_sites {
            let factor = placed
                .iter()
                .filter(|(s, _)| *s == site)
                .fold(identity.clone(), |m, (_, op)| &m * *op);
            acc = acc.kronecker(&factor);
        }
        acc
    };

    let mut h = DMatrix::<f64>::zeros(dim, dim);
    for (i, j, w) in bonds(spec, &couplings) {
        let term = embed(&[(i, &ops.sz), (j, &ops.sz)]);
        h += term * (-w);
    }
    for s in 0..spec.n_sites {
        let term = embed(&[(s, &ops.sx)]);
        h += term * (-couplings.field);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-14;

    fn approx(a: f64, b: f64) -> bool {
        (a - b).abs() < EPS
    }

    #[test]
    fn pauli_matrices_for_spin_half() {
        let ops = spin_operators(1, Convention::PauliScaled).unwrap();
        assert_eq!(ops.sz, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]));
        assert_eq!(ops.sx, DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    }

    #[test]
    fn spin_one_raw_matrices() {
        let ops = spin_operators(2, Convention::Raw).unwrap();
        assert_eq!(ops.sz_diagonal(), vec![1.0, 0.0, -1.0]);
        let r = 1.0 / 2f64.sqrt();
        let expected = DMatrix::from_row_slice(3, 3, &[0.0, r, 0.0, r, 0.0, r, 0.0, r, 0.0]);
        assert!((ops.sx - expected).abs().max() < EPS);
    }

    #[test]
    fn spin_three_halves_ladder() {
        // 0.5·sqrt(S(S+1) - m m') at S = 3/2: (3/2,1/2), (1/2,-1/2), (-1/2,-3/2)
        let ops = spin_operators(3, Convention::Raw).unwrap();
        let ladder = ops.ladder();
        assert!(approx(ladder[0], 3f64.sqrt() / 2.0));
        assert!(approx(ladder[1], 1.0));
        assert!(approx(ladder[2], 3f64.sqrt() / 2.0));
        assert_eq!(ops.sx, ops.sx.transpose());
    }

    #[test]
    fn zero_spin_rejected() {
        assert!(matches!(
            spin_operators(0, Convention::Raw),
            Err(Error::InvalidSpin(0))
        ));
    }

    #[test]
    fn dimensions() {
        assert_eq!(hilbert_dimension(&ChainSpec::nn(1, 3)).unwrap(), 8);
        assert_eq!(hilbert_dimension(&ChainSpec::nn(3, 11)).unwrap(), 4_194_304);
        assert_eq!(hilbert_dimension(&ChainSpec::nn(7, 8)).unwrap(), 16_777_216);
        assert!(matches!(
            hilbert_dimension(&ChainSpec::nn(7, 40)),
            Err(Error::DimensionOverflow { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::nnn(1, 2).validate().is_err());
        assert!(ChainSpec::nnn(1, 3).validate().is_ok());
        assert!(ChainSpec::nn(1, 1).validate().is_err());
        assert!(matches!(
            ChainSpec::nn(1, 30).validate(),
            Err(Error::MemoryBudget { .. })
        ));
        let nnn = ChainSpec::nnn(1, 6);
        assert_eq!(nnn.boundary, Boundary::Periodic);
        assert_eq!(
            nnn.coupling,
            Coupling::NextNearestNeighbor {
                ratio: DEFAULT_NNN_RATIO
            }
        );
        assert_eq!(ChainSpec::nn(3, 4).convention, Convention::Raw);
    }

    #[test]
    fn classical_limit_all_up() {
        // J = 1, B = 0 periodic: three satisfied bonds
        let spec = ChainSpec::nn(1, 3).with_boundary(Boundary::Periodic);
        let h = ChainHamiltonian::with_couplings(
            &spec,
            Couplings {
                j1: 1.0,
                j2: 0.0,
                field: 0.0,
            },
        )
        .unwrap();
        let up = StateVector::product(&spec, &[0, 0, 0]).unwrap();
        let out = h.apply(up.amplitudes()).unwrap();
        let mut expected = vec![0.0; 8];
        expected[0] = -3.0;
        assert_eq!(out, expected);
    }

    #[test]
    fn two_site_action_matches_hand_result() {
        // H|↑↑> = -|↑↑> - |↓↑> - |↑↓>
        let spec = ChainSpec::nn(1, 2);
        let up = StateVector::product(&spec, &[0, 0]).unwrap();
        let out = apply_hamiltonian(&spec, 1.0, up.amplitudes()).unwrap();
        assert_eq!(out, vec![-1.0, -1.0, -1.0, 0.0]);
    }

    #[test]
    fn dense_two_site_spectrum() {
        let h = dense_hamiltonian(&ChainSpec::nn(1, 2), 1.0).unwrap();
        let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        let r5 = 5f64.sqrt();
        for (got, want) in ev.iter().zip([-r5, -1.0, 1.0, r5]) {
            assert!((got - want).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn dense_lambda_zero_is_field_only() {
        let spec = ChainSpec::nn(1, 4);
        let h = dense_hamiltonian(&spec, 0.0).unwrap();
        assert!(h.diagonal().iter().all(|&x| x == 0.0));
        let e0 = h.symmetric_eigen().eigenvalues.min();
        assert!((e0 + 4.0).abs() < 1e-12);
    }

    #[test]
    fn dense_columns_equal_matvec() {
        for spec in [
            ChainSpec::nn(1, 5),
            ChainSpec::nnn(1, 5),
            ChainSpec::nn(3, 3).with_boundary(Boundary::Periodic),
            ChainSpec::nnn(2, 4).with_boundary(Boundary::Open),
        ] {
            let h = dense_hamiltonian(&spec, 0.73).unwrap();
            let op = ChainHamiltonian::new(&spec, 0.73).unwrap();
            for j in 0..op.dim() {
                let mut e = vec![0.0; op.dim()];
                e[j] = 1.0;
                let col = op.apply(&e).unwrap();
                for (i, x) in col.iter().enumerate() {
                    assert_eq!(*x, h[(i, j)], "{spec:?} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn diagonal_element_matches_dense() {
        let spec = ChainSpec::nnn(1, 6);
        let h = dense_hamiltonian(&spec, 1.3).unwrap();
        let op = ChainHamiltonian::new(&spec, 1.3).unwrap();
        for i in 0..op.dim() {
            assert_eq!(op.diagonal_element(i), h[(i, i)]);
        }
    }

    #[test]
    fn shape_mismatch() {
        let spec = ChainSpec::nn(1, 3);
        assert!(matches!(
            apply_hamiltonian(&spec, 1.0, &[0.0; 7]),
            Err(Error::Shape { expected: 8, actual: 7 })
        ));
    }

    #[test]
    fn dense_oracle_limit() {
        assert!(matches!(
            dense_hamiltonian(&ChainSpec::nn(1, 13), 1.0),
            Err(Error::OracleLimitExceeded { .. })
        ));
    }

    #[test]
    fn pauli_and_raw_related_by_rescaling() {
        // Pauli (J, B) equals raw (4J, 2B) for S = 1/2.
        for spec in [ChainSpec::nn(1, 6), ChainSpec::nnn(1, 7)] {
            let lambda = 0.8;
            let pauli = dense_hamiltonian(&spec, lambda).unwrap();
            let raw_spec = spec.with_convention(Convention::Raw);
            let c = Couplings::at_lambda(&spec, lambda);
            let raw = dense_hamiltonian_with(
                &raw_spec,
                Couplings {
                    j1: 4.0 * c.j1,
                    j2: 4.0 * c.j2,
                    field: 2.0 * c.field,
                },
            )
            .unwrap();
            assert!((pauli - raw).abs().max() < 1e-13);
        }
    }

    #[test]
    fn state_vector_checks() {
        let spec = ChainSpec::nn(1, 2);
        assert!(StateVector::new(&spec, vec![1.0, 0.0, 0.0]).is_err());
        assert!(StateVector::new(&spec, vec![1.0, 1.0, 0.0, 0.0]).is_err());
        let s = StateVector::normalized(&spec, vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        assert!((s.amplitudes()[0] - 0.5f64.sqrt()).abs() < EPS);
    }
}
