//! Finite-size analysis: the q-logarithmic extrapolation of `1/Γ`, the
//! spin power law `Γ_∞(S) = C [S(S+1)]^β`, and block-entropy extensivity.

use serde::{Deserialize, Serialize};

use crate::entropy::q_log;
use crate::error::{Error, Result};

/// Search range and step for the extrapolation exponent `a_q`.
pub const A_Q_MIN: f64 = 0.05;
pub const A_Q_MAX: f64 = 3.00;
pub const A_Q_STEP: f64 = 0.01;

/// Ordinary least-squares line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub sse: f64,
    pub residuals: Vec<f64>,
    /// Standard error of the intercept; zero for two points.
    pub intercept_stderr: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::Shape {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Underdetermined { got: n, need: 2 });
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite value in fit data".into()));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidInput("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - (intercept + slope * a)).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let intercept_stderr = if n > 2 {
        (sse / (nf - 2.0) * (1.0 / nf + mx * mx / sxx)).sqrt()
    } else {
        0.0
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        sse,
        residuals,
        intercept_stderr,
    })
}

/// `(1/ln_q N)^a_q`.
pub fn qlog_abscissa(n: usize, q: f64, a_q: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("N = {n} (need N >= 2)")));
    }
    let l = q_log(n as f64, q)?;
    if !(l > 0.0) {
        return Err(Error::Domain(format!("ln_q({n}) = {l} is not positive")));
    }
    Ok((1.0 / l).powf(a_q))
}

/// Thermodynamic-limit value of Γ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaLimit {
    Finite(f64),
    /// The extrapolated `1/Γ` does not stay positive.
    Divergent,
}

impl GammaLimit {
    pub fn finite(self) -> Option<f64> {
        match self {
            GammaLimit::Finite(g) => Some(g),
            GammaLimit::Divergent => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolationFit {
    pub q: f64,
    pub a_q: f64,
    pub slope: f64,
    /// Extrapolated `1/Γ` at `N → ∞`.
    pub intercept: f64,
    pub intercept_stderr: f64,
    pub r_squared: f64,
    pub sse: f64,
    pub residuals: Vec<f64>,
    pub points: Vec<(usize, f64)>,
    pub abscissa: Vec<f64>,
    pub gamma_infinity: GammaLimit,
}

impl ExtrapolationFit {
    /// True when the intercept is not significantly positive at `k` standard
    /// errors.
    pub fn intercept_consistent_with_zero(&self, k: f64) -> bool {
        self.intercept <= k * self.intercept_stderr
    }
}

pub fn gamma_infinite(fit: &ExtrapolationFit) -> GammaLimit {
    if fit.intercept > 0.0 {
        GammaLimit::Finite(1.0 / fit.intercept)
    } else {
        GammaLimit::Divergent
    }
}

fn a_q_candidates() -> impl Iterator<Item = f64> {
    let steps = ((A_Q_MAX - A_Q_MIN) / A_Q_STEP).round() as usize;
    (0..=steps).map(|k| ((A_Q_MIN + k as f64 * A_Q_STEP) * 100.0).round() / 100.0)
}

/// Fits `1/Γ = intercept + slope · (1/ln_q N)^a_q`, choosing `a_q` from a
/// grid by least squares. Ties go to the smaller `a_q`.
pub fn fit_gamma_extrapolation(points: &[(usize, f64)], q: f64) -> Result<ExtrapolationFit> {
    if points.len() < 4 {
        return Err(Error::Underdetermined {
            got: points.len(),
            need: 4,
        });
    }
    for &(n, gamma) in points {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidGamma { n, gamma });
        }
    }
    let mut ns: Vec<usize> = points.iter().map(|p| p.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() != points.len() {
        return Err(Error::InvalidInput("chain lengths must be distinct".into()));
    }
    let y: Vec<f64> = points.iter().map(|p| 1.0 / p.1).collect();
    let mut best: Option<(f64, Vec<f64>, LinearFit)> = None;
    for a in a_q_candidates() {
        let x = points
            .iter()
            .map(|&(n, _)| qlog_abscissa(n, q, a))
            .collect::<Result<Vec<_>>>()?;
        let fit = linear_fit(&x, &y)?;
        if best.as_ref().map_or(true, |b| fit.sse < b.2.sse) {
            best = Some((a, x, fit));
        }
    }
    let (a_q, abscissa, fit) = best.expect("candidate grid is non-empty");
    let mut out = ExtrapolationFit {
        q,
        a_q,
        slope: fit.slope,
        intercept: fit.intercept,
        intercept_stderr: fit.intercept_stderr,
        r_squared: fit.r_squared,
        sse: fit.sse,
        residuals: fit.residuals,
        points: points.to_vec(),
        abscissa,
        gamma_infinity: GammaLimit::Divergent,
    };
    out.gamma_infinity = gamma_infinite(&out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub c: f64,
    pub beta: f64,
    pub r_squared: f64,
}

impl PowerLawFit {
    pub fn eval(&self, s: f64) -> f64 {
        self.c * (s * (s + 1.0)).powf(self.beta)
    }
}

/// Log-log least squares of `Γ_∞` against `S(S+1)`.
pub fn fit_spin_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "power-law fit needs at least 3 spins, got {}",
            points.len()
        )));
    }
    for &(s, g) in points {
        if !(s > 0.0) || !(g > 0.0) || !g.is_finite() {
            return Err(Error::InvalidInput(format!("point (S = {s}, Γ = {g})")));
        }
    }
    let x: Vec<f64> = points.iter().map(|&(s, _)| (s * (s + 1.0)).ln()).collect();
    let y: Vec<f64> = points.iter().map(|&(_, g)| g.ln()).collect();
    let fit = linear_fit(&x, &y)?;
    Ok(PowerLawFit {
        c: fit.intercept.exp(),
        beta: fit.slope,
        r_squared: fit.r_squared,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensivityRecord {
    pub q: f64,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Mean of `S(L+1) - 2S(L) + S(L-1)`; negative means saturating.
    pub mean_second_difference: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensivityReport {
    pub n_sites: usize,
    pub max_block: usize,
    pub records: Vec<ExtensivityRecord>,
    /// q values from most to least linear.
    pub ordering: Vec<f64>,
}

impl ExtensivityReport {
    pub fn record(&self, q: f64) -> Option<&ExtensivityRecord> {
        self.records.iter().find(|r| r.q == q)
    }
}

/// Linearity of `S_q(L)` over `L = 1..=⌊N/2⌋`. Each curve lists `S_q(L)` for
/// `L = 1..N-1`.
pub fn extensivity_report(curves: &[(f64, Vec<f64>)], n_sites: usize) -> Result<ExtensivityReport> {
    if n_sites < 6 {
        return Err(Error::RangeTooShort(n_sites));
    }
    let half = n_sites / 2;
    let x: Vec<f64> = (1..=half).map(|l| l as f64).collect();
    let mut records = Vec::with_capacity(curves.len());
    for (q, values) in curves {
        if values.len() != n_sites - 1 {
            return Err(Error::InvalidInput(format!(
                "curve for q = {q} has {} points, expected {}",
                values.len(),
                n_sites - 1
            )));
        }
        let s = &values[..half];
        let fit = linear_fit(&x, s)?;
        let d2: Vec<f64> = s.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect();
        records.push(ExtensivityRecord {
            q: *q,
            slope: fit.slope,
            intercept: fit.intercept,
            r_squared: fit.r_squared,
            mean_second_difference: d2.iter().sum::<f64>() / d2.len() as f64,
        });
    }
    let mut order: Vec<&ExtensivityRecord> = records.iter().collect();
    order.sort_by(|a, b| b.r_squared.total_cmp(&a.r_squared));
    let ordering = order.iter().map(|r| r.q).collect();
    Ok(ExtensivityReport {
        n_sites,
        max_block: half,
        records,
        ordering,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::Q_SPECIAL_ISING;
    use proptest::prelude::*;

    #[test]
    fn abscissa_examples() {
        assert!((qlog_abscissa(7, 1.0, 1.0).unwrap() - 1.0 / 7f64.ln()).abs() < 1e-15);
        let v = qlog_abscissa(2, 1.0 + 1e-10, 2.0).unwrap();
        assert!((v - 2.0814).abs() < 1e-4);
        for n in [2, 5, 40] {
            assert_eq!(qlog_abscissa(n, 0.3, 0.0).unwrap(), 1.0);
        }
        assert!(qlog_abscissa(1, 0.3, 1.0).is_err());
    }

    #[test]
    fn line_fit_basics() {
        let f = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15 && (f.intercept - 1.0).abs() < 1e-15);
        assert_eq!(f.r_squared, 1.0);
        assert!(linear_fit(&[1.0], &[1.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn extrapolation_round_trip() {
        let pts: Vec<(usize, f64)> = (4..=14)
            .map(|n| (n, 1.0 / (0.5 + 2.0 * qlog_abscissa(n, Q_SPECIAL_ISING, 0.5).unwrap())))
            .collect();
        let fit = fit_gamma_extrapolation(&pts, Q_SPECIAL_ISING).unwrap();
        assert_eq!(fit.a_q, 0.5);
        assert!((fit.intercept - 0.5).abs() < 1e-6);
        assert!((fit.slope - 2.0).abs() < 1e-6);
        assert!(fit.r_squared > 1.0 - 1e-12);
        assert_eq!(fit.gamma_infinity, GammaLimit::Finite(1.0 / fit.intercept));
        assert!((gamma_infinite(&fit).finite().unwrap() - 2.0).abs() < 1e-5);
    }

    #[test]
    fn extrapolation_errors() {
        let pts = [(4, 1.0), (6, 1.1), (8, 1.2)];
        assert!(matches!(
            fit_gamma_extrapolation(&pts, 1.0),
            Err(Error::Underdetermined { got: 3, need: 4 })
        ));
        let pts = [(4, 1.0), (6, 1.1), (8, -1.2), (10, 1.0)];
        assert!(matches!(
            fit_gamma_extrapolation(&pts, 1.0),
            Err(Error::InvalidGamma { n: 8, .. })
        ));
        let pts = [(4, 1.0), (6, 1.1), (6, 1.2), (10, 1.0)];
        assert!(fit_gamma_extrapolation(&pts, 1.0).is_err());
    }

    #[test]
    fn divergent_marker() {
        let pts: Vec<(usize, f64)> = (4..=10)
            .map(|n| (n, 1.0 / (-0.2 + 3.0 / (n as f64).ln())))
            .collect();
        let fit = fit_gamma_extrapolation(&pts, 1.0).unwrap();
        assert!(fit.intercept < 0.0);
        assert_eq!(fit.gamma_infinity, GammaLimit::Divergent);
        assert!(fit.intercept_consistent_with_zero(2.0));
    }

    #[test]
    fn power_law_round_trip() {
        let pts: Vec<(f64, f64)> = [0.5, 1.5, 2.5, 3.5]
            .iter()
            .map(|&s: &f64| (s, 0.43 * (s * (s + 1.0)).powi(2)))
            .collect();
        let fit = fit_spin_power_law(&pts).unwrap();
        assert!((fit.c - 0.43).abs() < 1e-10);
        assert!((fit.beta - 2.0).abs() < 1e-10);
        assert!((fit.eval(1.0) - 0.43 * 4.0).abs() < 1e-9);
        assert!(fit_spin_power_law(&pts[..2]).is_err());
        assert!(fit_spin_power_law(&[(0.5, 1.0), (1.5, f64::INFINITY), (2.5, 2.0)]).is_err());
    }

    #[test]
    fn extensivity_synthetic() {
        let n = 12;
        let linear: Vec<f64> = (1..n).map(|l| 0.3 * l.min(n - l) as f64).collect();
        let root: Vec<f64> = (1..n).map(|l| (l.min(n - l) as f64).sqrt()).collect();
        let r = extensivity_report(&[(0.5, linear), (0.7, root)], n).unwrap();
        let lin = r.record(0.5).unwrap();
        assert!((lin.r_squared - 1.0).abs() < 1e-12);
        assert!(lin.mean_second_difference.abs() < 1e-12);
        assert!((lin.slope - 0.3).abs() < 1e-12);
        assert!(r.record(0.7).unwrap().mean_second_difference < 0.0);
        assert_eq!(r.ordering, vec![0.5, 0.7]);
        assert_eq!(r.max_block, 6);
        assert!(matches!(extensivity_report(&[], 5), Err(Error::RangeTooShort(5))));
        assert!(extensivity_report(&[(1.0, vec![0.0; 3])], 8).is_err());
    }

    proptest! {
        #[test]
        fn abscissa_decreases_with_n(n in 2usize..500, q in 0.01f64..1.0, a in 0.05f64..3.0) {
            prop_assert!(qlog_abscissa(n + 1, q, a).unwrap() < qlog_abscissa(n, q, a).unwrap());
        }

        #[test]
        fn extrapolation_recovers_model(k in 0usize..=295, c in 0.1f64..2.0, m in 0.1f64..5.0) {
            let a = ((A_Q_MIN + k as f64 * A_Q_STEP) * 100.0).round() / 100.0;
            let q = Q_SPECIAL_ISING;
            let pts: Vec<(usize, f64)> = [4usize, 6, 8, 10, 12, 14]
                .iter()
                .map(|&n| (n, 1.0 / (c + m * qlog_abscissa(n, q, a).unwrap())))
                .collect();
            let fit = fit_gamma_extrapolation(&pts, q).unwrap();
            prop_assert!(fit.sse < 1e-20);
            prop_assert!((fit.intercept - c).abs() < 1e-6 * (1.0 + c));
        }
    }
}
