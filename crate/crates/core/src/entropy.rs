//! Tsallis q-entropy, the q-logarithm, λ sweeps and the quantum Grüneisen
//! parameter `Γ_q = dS_q/dλ`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::entanglement::{self, ProbabilityVector};
use crate::error::{Error, Result};
use crate::lanczos::{self, LanczosConfig};
use crate::spin::{ChainSpec, StateVector};

/// Entropic index making block entropies extensive at the Ising critical point.
pub const Q_SPECIAL_ISING: f64 = 0.08276253029821969; // √37 − 6
/// The same index for the XY universality class.
pub const Q_SPECIAL_XY: f64 = 0.16227766016837933; // √10 − 3

/// Below this distance from 1 the von Neumann limit is used.
pub const Q_ONE_TOL: f64 = 1e-8;

fn is_q_one(q: f64) -> bool {
    (q - 1.0).abs() < Q_ONE_TOL
}

/// `ln_q(x) = (x^(1-q) - 1)/(1 - q)`, evaluated through `expm1` so that it
/// stays accurate as `q → 1`.
pub fn q_log(x: f64, q: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("q-logarithm of {x}")));
    }
    if !q.is_finite() {
        return Err(Error::Domain(format!("q = {q}")));
    }
    let ln = x.ln();
    if is_q_one(q) {
        return Ok(ln);
    }
    Ok(((1.0 - q) * ln).exp_m1() / (1.0 - q))
}

fn check_q(q: f64) -> Result<()> {
    if q > 0.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::UnsupportedQ(q))
    }
}

/// `S_q = (1 - Σ p_i^q)/(q - 1)` with `k = 1`.
///
/// Evaluated term-wise as `Σ p_i ln_q(1/p_i)`, smallest terms first. Zero
/// probabilities contribute nothing.
pub fn tsallis_entropy(p: &ProbabilityVector, q: f64) -> Result<f64> {
    check_q(q)?;
    let one = is_q_one(q);
    let mut s = 0.0;
    for &pi in p.as_slice().iter().rev() {
        if pi <= 0.0 {
            continue;
        }
        let ln_inv = -pi.ln();
        s += if one {
            pi * ln_inv
        } else {
            pi * ((1.0 - q) * ln_inv).exp_m1() / (1.0 - q)
        };
    }
    Ok(s.max(0.0))
}

/// Which reduced state an entropy is computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntanglementTarget {
    /// Single-site reduced density matrix.
    Site(usize),
    /// The leftmost `L` sites.
    Block(usize),
}

impl EntanglementTarget {
    /// The central site `⌊N/2⌋`.
    pub fn central_site(spec: &ChainSpec) -> Self {
        EntanglementTarget::Site(entanglement::central_site(spec))
    }

    pub fn probabilities(&self, state: &StateVector, spec: &ChainSpec) -> Result<ProbabilityVector> {
        match *self {
            EntanglementTarget::Site(i) => {
                entanglement::rdm_probabilities(&entanglement::single_site_rdm(state, spec, i)?)
            }
            EntanglementTarget::Block(l) => entanglement::block_probabilities(state, spec, l),
        }
    }
}

impl fmt::Display for EntanglementTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntanglementTarget::Site(i) => write!(f, "site:{i}"),
            EntanglementTarget::Block(l) => write!(f, "block:{l}"),
        }
    }
}

impl FromStr for EntanglementTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("target `{s}` (expected site:<i> or block:<L>)"));
        let (kind, idx) = s.split_once(':').ok_or_else(bad)?;
        let idx: usize = idx.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "site" => Ok(EntanglementTarget::Site(idx)),
            "block" => Ok(EntanglementTarget::Block(idx)),
            _ => Err(bad()),
        }
    }
}

/// `min, min + step, …` up to `max` inclusive (within half a step).
pub fn lambda_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !min.is_finite() || !max.is_finite() || max < min {
        return Err(Error::InsufficientGrid(format!(
            "min = {min}, max = {max}, step = {step}"
        )));
    }
    let n = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| min + i as f64 * step).collect())
}

/// Returns the spacing of a strictly ascending, uniform grid of ≥ 3 points.
pub fn grid_spacing(grid: &[f64]) -> Result<f64> {
    if grid.len() < 3 {
        return Err(Error::InsufficientGrid(format!("{} points", grid.len())));
    }
    let h = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::InsufficientGrid("grid is not ascending".into()));
    }
    let scale = grid.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    for w in grid.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-12 * scale {
            return Err(Error::InsufficientGrid(format!(
                "spacing {} differs from {h}",
                w[1] - w[0]
            )));
        }
    }
    Ok(h)
}

/// `S_q` at one target for a sampled λ grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyCurve {
    pub q: f64,
    pub target: EntanglementTarget,
    pub lambda_grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Ground-state degeneracy flag per grid point.
    pub degenerate: Vec<bool>,
    pub spec_fingerprint: String,
}

/// `Γ_q` on the same grid as its parent curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaCurve {
    pub q: f64,
    pub target: EntanglementTarget,
    pub lambda_grid: Vec<f64>,
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub lambda: f64,
    pub gamma: f64,
    /// The maximum sits on the first or last grid point, so the grid is too
    /// narrow to bracket it.
    pub at_boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepOptions {
    pub lanczos: LanczosConfig,
    /// Concurrent λ points. `1` solves them in order and stops at the first
    /// failure.
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            lanczos: LanczosConfig::default(),
            workers: 1,
        }
    }
}

/// Hex SHA-256 of the chain and solver settings.
pub fn spec_fingerprint(spec: &ChainSpec, cfg: &LanczosConfig) -> String {
    let json = serde_json::to_vec(&(spec, cfg)).expect("plain data serializes");
    Sha256::digest(&json)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Entropies of one solved grid point, indexed `[target][q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub lambda: f64,
    pub entropies: Vec<Vec<f64>>,
    pub degenerate: bool,
}

fn solve_point(
    spec: &ChainSpec,
    lambda: f64,
    q_list: &[f64],
    targets: &[EntanglementTarget],
    cfg: &LanczosConfig,
) -> Result<SweepPoint> {
    let wrap = |e| Error::SweepAborted {
        lambda,
        source: Box::new(e),
    };
    let gs = lanczos::ground_state(spec, lambda, cfg).map_err(wrap)?;
    let mut entropies = Vec::with_capacity(targets.len());
    for t in targets {
        let p = t.probabilities(&gs.vector, spec).map_err(wrap)?;
        entropies.push(
            q_list
                .iter()
                .map(|&q| tsallis_entropy(&p, q))
                .collect::<Result<Vec<_>>>()
                .map_err(wrap)?,
        );
    }
    Ok(SweepPoint {
        lambda,
        entropies,
        degenerate: gs.degenerate,
    })
}

/// Solves every grid point and returns the successfully solved prefix of the
/// grid together with the first failure, if any.
pub fn sweep_points(
    spec: &ChainSpec,
    grid: &[f64],
    q_list: &[f64],
    targets: &[EntanglementTarget],
    opts: &SweepOptions,
) -> (Vec<SweepPoint>, Option<Error>) {
    if let Err(e) = opts
        .lanczos
        .validate()
        .and_then(|_| spec.validate())
        .and_then(|_| q_list.iter().try_for_each(|&q| check_q(q)))
    {
        return (Vec::new(), Some(e));
    }
    let results: Vec<Result<SweepPoint>> = if opts.workers <= 1 {
        let mut out = Vec::with_capacity(grid.len());
        for &l in grid {
            let r = solve_point(spec, l, q_list, targets, &opts.lanczos);
            let failed = r.is_err();
            out.push(r);
            if failed {
                break;
            }
        }
        out
    } else {
        let pool = match rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
        {
            Ok(p) => p,
            Err(e) => return (Vec::new(), Some(Error::InvalidInput(e.to_string()))),
        };
        pool.install(|| {
            grid.par_iter()
                .map(|&l| solve_point(spec, l, q_list, targets, &opts.lanczos))
                .collect()
        })
    };
    let mut points = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Ok(p) => points.push(p),
            Err(e) => return (points, Some(e)),
        }
    }
    (points, None)
}

/// One curve per `(target, q)` pair, target-major. Each ground state is
/// solved once and shared by every target and q.
pub fn entropy_sweep(
    spec: &ChainSpec,
    grid: &[f64],
    q_list: &[f64],
    targets: &[EntanglementTarget],
    opts: &SweepOptions,
) -> Result<Vec<EntropyCurve>> {
    grid_spacing(grid)?;
    let (points, err) = sweep_points(spec, grid, q_list, targets, opts);
    if let Some(e) = err {
        return Err(e);
    }
    let fingerprint = spec_fingerprint(spec, &opts.lanczos);
    let degenerate: Vec<bool> = points.iter().map(|p| p.degenerate).collect();
    let mut curves = Vec::with_capacity(targets.len() * q_list.len());
    for (ti, t) in targets.iter().enumerate() {
        for (qi, &q) in q_list.iter().enumerate() {
            curves.push(EntropyCurve {
                q,
                target: *t,
                lambda_grid: grid.to_vec(),
                values: points.iter().map(|p| p.entropies[ti][qi]).collect(),
                degenerate: degenerate.clone(),
                spec_fingerprint: fingerprint.clone(),
            });
        }
    }
    Ok(curves)
}

/// Second-order finite differences on a uniform grid: central in the
/// interior, one-sided three-point at both ends.
pub fn derivative(grid: &[f64], values: &[f64]) -> Result<Vec<f64>> {
    if grid.len() != values.len() {
        return Err(Error::Shape {
            expected: grid.len(),
            actual: values.len(),
        });
    }
    let h = grid_spacing(grid)?;
    let n = values.len();
    let f = values;
    let mut d = Vec::with_capacity(n);
    d.push((-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h));
    for i in 1..n - 1 {
        d.push((f[i + 1] - f[i - 1]) / (2.0 * h));
    }
    d.push((3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h));
    Ok(d)
}

pub fn gamma_from_curve(curve: &EntropyCurve) -> Result<GammaCurve> {
    Ok(GammaCurve {
        q: curve.q,
        target: curve.target,
        lambda_grid: curve.lambda_grid.clone(),
        gamma: derivative(&curve.lambda_grid, &curve.values)?,
    })
}

/// Grid argmax refined by the parabola through it and its two neighbours.
/// Ties go to the smaller λ.
pub fn locate_peak(curve: &GammaCurve) -> Result<Peak> {
    let g = &curve.gamma;
    let x = &curve.lambda_grid;
    if g.len() < 3 || x.len() != g.len() {
        return Err(Error::InsufficientGrid(format!("{} points", g.len())));
    }
    let mut i = 0;
    for (j, v) in g.iter().enumerate() {
        if *v > g[i] {
            i = j;
        }
    }
    if i == 0 || i == g.len() - 1 {
        return Ok(Peak {
            lambda: x[i],
            gamma: g[i],
            at_boundary: true,
        });
    }
    let (a, b, c) = (g[i - 1], g[i], g[i + 1]);
    let curvature = a - 2.0 * b + c;
    if curvature >= 0.0 {
        return Ok(Peak {
            lambda: x[i],
            gamma: b,
            at_boundary: false,
        });
    }
    let h = x[i + 1] - x[i];
    let t = 0.5 * (a - c) / curvature;
    Ok(Peak {
        lambda: x[i] + t * h,
        gamma: b - 0.25 * (a - c) * t,
        at_boundary: false,
    })
}

/// `Γ_q(λ) ≈ (S_q(λ+h) - S_q(λ-h))/2h` for each q, from two ground states.
pub fn gamma_at(
    spec: &ChainSpec,
    lambda: f64,
    h: f64,
    q_list: &[f64],
    target: EntanglementTarget,
    cfg: &LanczosConfig,
) -> Result<Vec<f64>> {
    if !(h > 0.0) || lambda - h < 0.0 {
        return Err(Error::Domain(format!(
            "stencil λ = {lambda} ± {h} leaves λ ≥ 0"
        )));
    }
    let lo = solve_point(spec, lambda - h, q_list, &[target], cfg)?;
    let hi = solve_point(spec, lambda + h, q_list, &[target], cfg)?;
    Ok(lo.entropies[0]
        .iter()
        .zip(&hi.entropies[0])
        .map(|(a, b)| (b - a) / (2.0 * h))
        .collect())
}

/// Γ evaluated at the finite-size critical point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeakGamma {
    /// Peak of the `q = 1` Γ curve over the grid.
    pub lambda_star: f64,
    pub at_boundary: bool,
    /// `Γ_q(λ*)` per requested q, central difference with the grid spacing.
    pub gamma: Vec<f64>,
}

/// Locates `λ*` from the von Neumann Γ curve and evaluates every `Γ_q` there.
///
/// The q = 1 curve is used for the location because single-site `Γ_q` for
/// small q has no interior maximum.
pub fn gamma_at_peak(
    spec: &ChainSpec,
    grid: &[f64],
    q_list: &[f64],
    target: EntanglementTarget,
    opts: &SweepOptions,
) -> Result<PeakGamma> {
    let h = grid_spacing(grid)?;
    let curves = entropy_sweep(spec, grid, &[1.0], &[target], opts)?;
    let peak = locate_peak(&gamma_from_curve(&curves[0])?)?;
    let gamma = gamma_at(spec, peak.lambda, h, q_list, target, &opts.lanczos)?;
    Ok(PeakGamma {
        lambda_star: peak.lambda,
        at_boundary: peak.at_boundary,
        gamma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::{rdm_probabilities, single_site_rdm};
    use proptest::prelude::*;

    fn pv(p: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(p.to_vec()).unwrap()
    }

    #[test]
    fn special_indices() {
        assert!((Q_SPECIAL_ISING - (37f64.sqrt() - 6.0)).abs() < 1e-15);
        assert!((Q_SPECIAL_XY - (10f64.sqrt() - 3.0)).abs() < 1e-15);
    }

    #[test]
    fn q_log_values() {
        for q in [0.01, 0.5, 1.0, 2.0] {
            assert_eq!(q_log(1.0, q).unwrap(), 0.0);
        }
        assert_eq!(q_log(7.0, 1.0).unwrap(), 7f64.ln());
        assert!((q_log(7.0, 1.0 + 1e-9).unwrap() - 7f64.ln()).abs() < 1e-15);
        let closed = (8f64.powf(1.0 - Q_SPECIAL_ISING) - 1.0) / (1.0 - Q_SPECIAL_ISING);
        let v = q_log(8.0, Q_SPECIAL_ISING).unwrap();
        assert!((v - closed).abs() < 1e-13);
        assert!((v - 6.2528).abs() < 1e-3);
        assert!(q_log(0.0, 0.5).is_err());
        assert!(q_log(-1.0, 0.5).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(tsallis_entropy(&pv(&[1.0]), 0.3).unwrap(), 0.0);
        assert_eq!(tsallis_entropy(&pv(&[1.0, 0.0]), 1.0).unwrap(), 0.0);
        let half = pv(&[0.5, 0.5]);
        assert!((tsallis_entropy(&half, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        let s = tsallis_entropy(&half, Q_SPECIAL_ISING).unwrap();
        assert!((s - q_log(2.0, Q_SPECIAL_ISING).unwrap()).abs() < 1e-14);
        assert!((s - 0.9687).abs() < 1e-3);
        assert!(matches!(tsallis_entropy(&half, 0.0), Err(Error::UnsupportedQ(_))));
        assert!(matches!(tsallis_entropy(&half, -1.0), Err(Error::UnsupportedQ(_))));
    }

    #[test]
    fn entropy_matches_textbook_formula() {
        let p = pv(&[0.6, 0.3, 0.1]);
        for q in [0.01, 0.2, 0.7, 1.5, 3.0] {
            let sum: f64 = p.as_slice().iter().map(|x| x.powf(q)).sum();
            let want = (1.0 - sum) / (q - 1.0);
            assert!((tsallis_entropy(&p, q).unwrap() - want).abs() < 1e-14);
        }
    }

    #[test]
    fn target_parsing() {
        assert_eq!("site:3".parse::<EntanglementTarget>().unwrap(), EntanglementTarget::Site(3));
        assert_eq!("block:10".parse::<EntanglementTarget>().unwrap(), EntanglementTarget::Block(10));
        assert!("site".parse::<EntanglementTarget>().is_err());
        assert!("edge:1".parse::<EntanglementTarget>().is_err());
        assert_eq!(EntanglementTarget::Block(4).to_string(), "block:4");
    }

    #[test]
    fn grids() {
        let g = lambda_grid(0.2, 2.0, 0.02).unwrap();
        assert_eq!(g.len(), 91);
        assert!((g[90] - 2.0).abs() < 1e-12);
        assert!((grid_spacing(&g).unwrap() - 0.02).abs() < 1e-14);
        assert!(grid_spacing(&[0.0, 1.0]).is_err());
        assert!(grid_spacing(&[0.0, 1.0, 3.0]).is_err());
        assert!(grid_spacing(&[2.0, 1.0, 0.0]).is_err());
        assert!(lambda_grid(1.0, 0.0, 0.1).is_err());
    }

    fn synthetic(values: impl Fn(f64) -> f64) -> EntropyCurve {
        let grid = lambda_grid(0.0, 2.0, 0.1).unwrap();
        EntropyCurve {
            q: 1.0,
            target: EntanglementTarget::Site(0),
            values: grid.iter().map(|&x| values(x)).collect(),
            degenerate: vec![false; grid.len()],
            lambda_grid: grid,
            spec_fingerprint: String::new(),
        }
    }

    #[test]
    fn finite_differences_on_polynomials() {
        let g = gamma_from_curve(&synthetic(|_| 0.7)).unwrap();
        assert!(g.gamma.iter().all(|&v| v.abs() < 1e-12));
        let g = gamma_from_curve(&synthetic(|x| 2.0 * x)).unwrap();
        assert!(g.gamma.iter().all(|&v| (v - 2.0).abs() < 1e-12));
        let g = gamma_from_curve(&synthetic(|x| x * x)).unwrap();
        for (x, v) in g.lambda_grid.iter().zip(&g.gamma) {
            assert!((v - 2.0 * x).abs() < 1e-12);
        }
        let mut short = synthetic(|x| x);
        short.lambda_grid.truncate(2);
        short.values.truncate(2);
        assert!(matches!(gamma_from_curve(&short), Err(Error::InsufficientGrid(_))));
    }

    #[test]
    fn peak_refinement() {
        let grid: Vec<f64> = (0..21).map(|i| 0.03 + 0.1 * i as f64).collect();
        let curve = GammaCurve {
            q: 1.0,
            target: EntanglementTarget::Site(0),
            gamma: grid.iter().map(|x| 3.0 - (x - 1.0) * (x - 1.0)).collect(),
            lambda_grid: grid,
        };
        let p = locate_peak(&curve).unwrap();
        assert!(!p.at_boundary);
        assert!((p.lambda - 1.0).abs() < 1e-12);
        assert!((p.gamma - 3.0).abs() < 1e-12);

        let mono = GammaCurve {
            gamma: curve.lambda_grid.iter().map(|x| -x).collect(),
            ..curve.clone()
        };
        let p = locate_peak(&mono).unwrap();
        assert!(p.at_boundary);
        assert_eq!(p.lambda, curve.lambda_grid[0]);
    }

    #[test]
    fn peak_ties_prefer_smaller_lambda() {
        let curve = GammaCurve {
            q: 1.0,
            target: EntanglementTarget::Site(0),
            lambda_grid: vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            gamma: vec![0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
        };
        assert_eq!(locate_peak(&curve).unwrap().lambda, 1.0);
    }

    #[test]
    fn sweep_through_product_point_and_dense_oracle() {
        let spec = ChainSpec::nn(1, 2);
        let grid = [0.0, 0.5, 1.0];
        let q = [0.01, Q_SPECIAL_ISING, 1.0];
        let curves = entropy_sweep(&spec, &grid, &q, &[EntanglementTarget::Site(0)], &Default::default()).unwrap();
        assert_eq!(curves.len(), 3);
        for c in &curves {
            assert!(c.values[0].abs() < 1e-12);
        }
        let gs = lanczos::ground_state_dense(&spec, 1.0).unwrap();
        let p = rdm_probabilities(&single_site_rdm(&gs.vector, &spec, 0).unwrap()).unwrap();
        let want: f64 = p.as_slice().iter().filter(|&&x| x > 0.0).map(|x| -x * x.ln()).sum();
        assert!((curves[2].values[2] - want).abs() < 1e-12);
    }

    #[test]
    fn sweep_is_deterministic_and_worker_independent() {
        let spec = ChainSpec::nn(1, 8);
        let grid = lambda_grid(0.5, 1.5, 0.25).unwrap();
        let targets = [EntanglementTarget::Site(4), EntanglementTarget::Block(4)];
        let a = entropy_sweep(&spec, &grid, &[0.7, 1.0], &targets, &Default::default()).unwrap();
        let b = entropy_sweep(&spec, &grid, &[0.7, 1.0], &targets, &Default::default()).unwrap();
        let opts = SweepOptions { workers: 3, ..Default::default() };
        let c = entropy_sweep(&spec, &grid, &[0.7, 1.0], &targets, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.len(), 4);
        assert_eq!(a[0].spec_fingerprint.len(), 64);
    }

    #[test]
    fn sweep_failure_reports_lambda() {
        let spec = ChainSpec::nn(1, 6);
        let opts = SweepOptions {
            lanczos: LanczosConfig { max_krylov: 3, max_restarts: 0, ..Default::default() },
            workers: 1,
        };
        let err = entropy_sweep(&spec, &[0.0, 0.5, 1.0], &[1.0], &[EntanglementTarget::Site(3)], &opts).unwrap_err();
        match err {
            Error::SweepAborted { lambda, .. } => assert!(lambda == 0.0 || lambda == 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn peak_of_small_chain_is_interior() {
        let spec = ChainSpec::nn(1, 8);
        let grid = lambda_grid(0.2, 2.0, 0.02).unwrap();
        let pg = gamma_at_peak(&spec, &grid, &[1.0, Q_SPECIAL_ISING], EntanglementTarget::central_site(&spec), &Default::default()).unwrap();
        assert!(!pg.at_boundary);
        assert!(pg.lambda_star > 0.7 && pg.lambda_star < 1.1);
        assert!(pg.gamma.iter().all(|g| *g > 0.0));
    }

    fn prob_vector(max_len: usize) -> impl Strategy<Value = ProbabilityVector> {
        prop::collection::vec(0.0f64..1.0, 1..=max_len).prop_filter_map("zero weight", |w| {
            ProbabilityVector::from_weights(w).ok()
        })
    }

    proptest! {
        #[test]
        fn entropy_nonnegative_and_zero_only_when_pure(p in prob_vector(64), q in 0.01f64..3.0) {
            let s = tsallis_entropy(&p, q).unwrap();
            prop_assert!(s >= 0.0);
            if p.is_pure() {
                prop_assert!(s < 1e-9);
            } else if p.as_slice()[1] > 1e-6 {
                prop_assert!(s > 0.0);
            }
        }

        #[test]
        fn entropy_bounded_by_uniform(p in prob_vector(64), q in 0.01f64..3.0) {
            let d = p.len();
            let bound = q_log(d as f64, q).unwrap();
            prop_assert!(tsallis_entropy(&p, q).unwrap() <= bound * (1.0 + 1e-12) + 1e-12);
            let u = ProbabilityVector::uniform(d).unwrap();
            prop_assert!((tsallis_entropy(&u, q).unwrap() - bound).abs() <= 1e-10 * (1.0 + bound));
        }

        #[test]
        fn entropy_nonincreasing_in_q(p in prob_vector(64), q1 in 0.01f64..3.0, dq in 0.0f64..2.0) {
            let s1 = tsallis_entropy(&p, q1).unwrap();
            let s2 = tsallis_entropy(&p, q1 + dq).unwrap();
            prop_assert!(s1 >= s2 - 1e-12 * (1.0 + s1));
        }

        #[test]
        fn entropy_continuous_at_q_one(p in prob_vector(64)) {
            let s1 = tsallis_entropy(&p, 1.0).unwrap();
            for q in [1.0 - 1e-6, 1.0 + 1e-6] {
                prop_assert!((tsallis_entropy(&p, q).unwrap() - s1).abs() <= 1e-4 * (1.0 + s1));
            }
        }

        #[test]
        fn q_log_is_increasing(x in 1.0f64..1e3, dx in 1e-3f64..10.0, q in 0.01f64..1.5) {
            prop_assert!(q_log(x + dx, q).unwrap() > q_log(x, q).unwrap());
        }
    }
}
