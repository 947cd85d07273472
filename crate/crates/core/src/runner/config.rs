//! `key=value` run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::entropy::{self, EntanglementTarget, SweepOptions, Q_SPECIAL_ISING};
use crate::error::{Error, Result};
use crate::lanczos::LanczosConfig;
use crate::spin::{Boundary, ChainSpec, Convention, Coupling, DEFAULT_NNN_RATIO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Nn,
    Nnn,
}

/// Reduced state used by `sweep` and `extrapolate`, or the full block scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetChoice {
    Site(usize),
    Block(usize),
    Scan,
}

impl TargetChoice {
    /// The concrete target for a chain; `None` selects the central site.
    pub fn resolve(choice: Option<TargetChoice>, spec: &ChainSpec) -> Result<EntanglementTarget> {
        match choice {
            None => Ok(EntanglementTarget::central_site(spec)),
            Some(TargetChoice::Site(i)) => Ok(EntanglementTarget::Site(i)),
            Some(TargetChoice::Block(l)) => Ok(EntanglementTarget::Block(l)),
            Some(TargetChoice::Scan) => Err(Error::config("target", "`scan` is only valid for blockscan")),
        }
    }
}

/// How Γ is sampled for each chain length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    /// At the peak of the finite-size q = 1 Γ curve.
    Peak,
    /// At a fixed λ.
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// `2S`.
    pub two_s: u32,
    pub n: Option<usize>,
    pub model: Model,
    pub ratio: f64,
    /// `None` follows the model default.
    pub boundary: Option<Boundary>,
    /// `None` follows the spin default.
    pub convention: Option<Convention>,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    /// Single λ used by `blockscan`.
    pub lambda: f64,
    pub q_list: Vec<f64>,
    pub target: Option<TargetChoice>,
    pub n_list: Vec<usize>,
    pub mode: GammaMode,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub tol: Option<f64>,
    /// Injected `(x, Γ)` pairs that bypass the solver: `(N, Γ)` for
    /// `extrapolate`, `(S, Γ_∞)` for `spin-power`.
    pub gammas: Vec<(f64, f64)>,
    /// `2S` values for `spin-power`.
    pub spin_list: Vec<u32>,
    pub input: Option<PathBuf>,
    pub x_column: Option<String>,
    pub y_column: Option<String>,
    pub series_column: Option<String>,
    pub title: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            two_s: 1,
            n: None,
            model: Model::Nn,
            ratio: DEFAULT_NNN_RATIO,
            boundary: None,
            convention: None,
            lambda_min: 0.2,
            lambda_max: 2.0,
            lambda_step: 0.02,
            lambda: 1.0,
            q_list: vec![1.0],
            target: None,
            n_list: Vec::new(),
            mode: GammaMode::Peak,
            out_dir: PathBuf::from("out"),
            workers: 1,
            tol: None,
            gammas: Vec::new(),
            spin_list: Vec::new(),
            input: None,
            x_column: None,
            y_column: None,
            series_column: None,
            title: None,
        }
    }
}

const KEYS: &[&str] = &[
    "spin", "n", "model", "ratio", "boundary", "convention", "lambda_min", "lambda_max",
    "lambda_step", "lambda", "q_list", "target", "n_list", "mode", "out_dir", "workers", "tol",
    "gammas", "spin_list", "input", "x_column", "y_column", "series_column", "title",
];

/// Parses `1/2`, `3/2`, `1`, … into `2S`.
pub fn parse_spin(s: &str) -> Option<u32> {
    let s = s.trim();
    let two_s = match s.split_once('/') {
        Some((num, "2")) => num.trim().parse::<u32>().ok()?,
        Some(_) => return None,
        None => s.parse::<u32>().ok()?.checked_mul(2)?,
    };
    (two_s >= 1).then_some(two_s)
}

pub fn format_spin(two_s: u32) -> String {
    if two_s % 2 == 0 {
        (two_s / 2).to_string()
    } else {
        format!("{two_s}/2")
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| Error::config(key, format!("`{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(Error::config(key, format!("`{v}` is not finite")));
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim()
        .parse()
        .map_err(|_| Error::config(key, format!("`{v}` is not a non-negative integer")))
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_q(v: &str) -> Result<f64> {
    let q = if v == "special" {
        Q_SPECIAL_ISING
    } else {
        parse_f64("q_list", v)?
    };
    if !(q > 0.0) {
        return Err(Error::config("q_list", format!("q = {q} must be positive")));
    }
    Ok(q)
}

fn format_q(q: f64) -> String {
    if q == Q_SPECIAL_ISING {
        "special".into()
    } else {
        q.to_string()
    }
}

/// Parses the text form: one `key=value` per line, `#` starts a comment.
/// Unknown and repeated keys are rejected.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<&str> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::config(line, "expected key=value"))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::config(key, "unknown key"));
        }
        if seen.contains(&key) {
            return Err(Error::config(key, "given more than once"));
        }
        seen.push(key);
        apply(&mut cfg, key, value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn apply(cfg: &mut RunConfig, key: &str, v: &str) -> Result<()> {
    match key {
        "spin" => {
            cfg.two_s = parse_spin(v)
                .ok_or_else(|| Error::config(key, format!("`{v}` is not a positive (half-)integer")))?
        }
        "n" => cfg.n = Some(parse_usize(key, v)?),
        "model" => {
            cfg.model = match v {
                "nn" => Model::Nn,
                "nnn" => Model::Nnn,
                _ => return Err(Error::config(key, format!("`{v}` (expected nn or nnn)"))),
            }
        }
        "ratio" => cfg.ratio = parse_f64(key, v)?,
        "boundary" => {
            cfg.boundary = Some(match v {
                "open" => Boundary::Open,
                "periodic" => Boundary::Periodic,
                _ => return Err(Error::config(key, format!("`{v}` (expected open or periodic)"))),
            })
        }
        "convention" => {
            cfg.convention = Some(match v {
                "pauli" => Convention::PauliScaled,
                "raw" => Convention::Raw,
                _ => return Err(Error::config(key, format!("`{v}` (expected pauli or raw)"))),
            })
        }
        "lambda_min" => cfg.lambda_min = parse_f64(key, v)?,
        "lambda_max" => cfg.lambda_max = parse_f64(key, v)?,
        "lambda_step" => cfg.lambda_step = parse_f64(key, v)?,
        "lambda" => cfg.lambda = parse_f64(key, v)?,
        "q_list" => cfg.q_list = split_list(v).map(parse_q).collect::<Result<_>>()?,
        "target" => {
            cfg.target = Some(if v == "scan" {
                TargetChoice::Scan
            } else {
                match v.parse::<EntanglementTarget>() {
                    Ok(EntanglementTarget::Site(i)) => TargetChoice::Site(i),
                    Ok(EntanglementTarget::Block(l)) => TargetChoice::Block(l),
                    Err(_) => {
                        return Err(Error::config(key, format!("`{v}` (expected site:<i>, block:<L> or scan)")))
                    }
                }
            })
        }
        "n_list" => cfg.n_list = split_list(v).map(|s| parse_usize(key, s)).collect::<Result<_>>()?,
        "mode" => {
            cfg.mode = if v == "peak" {
                GammaMode::Peak
            } else if let Some(l) = v.strip_prefix("fixed:") {
                GammaMode::Fixed(parse_f64(key, l)?)
            } else {
                return Err(Error::config(key, format!("`{v}` (expected peak or fixed:<lambda>)")));
            }
        }
        "out_dir" => cfg.out_dir = PathBuf::from(v),
        "workers" => cfg.workers = parse_usize(key, v)?,
        "tol" => cfg.tol = Some(parse_f64(key, v)?),
        "gammas" => {
            cfg.gammas = split_list(v)
                .map(|pair| {
                    let (x, g) = pair
                        .split_once(':')
                        .ok_or_else(|| Error::config(key, format!("`{pair}` (expected x:gamma)")))?;
                    let x = match parse_spin(x) {
                        Some(two_s) if x.contains('/') => two_s as f64 / 2.0,
                        _ => parse_f64(key, x)?,
                    };
                    Ok((x, parse_f64(key, g)?))
                })
                .collect::<Result<_>>()?
        }
        "spin_list" => {
            cfg.spin_list = split_list(v)
                .map(|s| parse_spin(s).ok_or_else(|| Error::config(key, format!("`{s}` is not a spin"))))
                .collect::<Result<_>>()?
        }
        "input" => cfg.input = Some(PathBuf::from(v)),
        "x_column" => cfg.x_column = Some(v.to_string()),
        "y_column" => cfg.y_column = Some(v.to_string()),
        "series_column" => cfg.series_column = Some(v.to_string()),
        "title" => cfg.title = Some(v.to_string()),
        _ => unreachable!("key list checked by caller"),
    }
    Ok(())
}

impl RunConfig {
    /// Checks value ranges that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        if self.two_s < 1 {
            return Err(Error::config("spin", "must be positive"));
        }
        if let Some(n) = self.n {
            if n < 2 {
                return Err(Error::config("n", "need at least 2 sites"));
            }
            if self.model == Model::Nnn && n < 3 {
                return Err(Error::config("n", "nnn needs at least 3 sites"));
            }
        }
        if self.q_list.is_empty() {
            return Err(Error::config("q_list", "empty"));
        }
        if self.workers == 0 {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if let Some(t) = self.tol {
            if t < 0.0 {
                return Err(Error::config("tol", "must be non-negative"));
            }
        }
        if !(self.lambda >= 0.0) {
            return Err(Error::config("lambda", "must be non-negative"));
        }
        if self.lambda_min < 0.0 {
            return Err(Error::config("lambda_min", "must be non-negative"));
        }
        if let GammaMode::Fixed(l) = self.mode {
            if !(l > 0.0) {
                return Err(Error::config("mode", "fixed lambda must be positive"));
            }
        }
        Ok(())
    }

    pub fn require_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| Error::config("n", "required"))
    }

    /// The λ grid from `lambda_min..=lambda_max` in steps of `lambda_step`.
    pub fn grid(&self) -> Result<Vec<f64>> {
        let g = entropy::lambda_grid(self.lambda_min, self.lambda_max, self.lambda_step)
            .map_err(|e| Error::config("lambda_step", e.to_string()))?;
        entropy::grid_spacing(&g).map_err(|e| Error::config("lambda_step", e.to_string()))?;
        Ok(g)
    }

    /// Chain with `2S = two_s` and `n` sites, other settings from the config.
    pub fn chain_for(&self, two_s: u32, n: usize) -> Result<ChainSpec> {
        let (coupling, default_boundary) = match self.model {
            Model::Nn => (Coupling::NearestNeighbor, Boundary::Open),
            Model::Nnn => (Coupling::NextNearestNeighbor { ratio: self.ratio }, Boundary::Periodic),
        };
        let spec = ChainSpec {
            two_s,
            n_sites: n,
            coupling,
            boundary: self.boundary.unwrap_or(default_boundary),
            convention: self.convention.unwrap_or(Convention::default_for(two_s)),
        };
        spec.validate().map_err(|e| Error::config("n", e.to_string()))?;
        Ok(spec)
    }

    pub fn chain(&self) -> Result<ChainSpec> {
        self.chain_for(self.two_s, self.require_n()?)
    }

    pub fn lanczos(&self) -> LanczosConfig {
        let mut cfg = LanczosConfig::default();
        if let Some(t) = self.tol {
            cfg.tol = t;
        }
        cfg
    }

    pub fn sweep_options(&self) -> Result<SweepOptions> {
        let opts = SweepOptions {
            lanczos: self.lanczos(),
            workers: self.workers,
        };
        opts.lanczos.validate().map_err(|e| Error::config("tol", e.to_string()))?;
        Ok(opts)
    }

    /// The text form; [`parse_config`] reads it back to an identical value.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("spin", format_spin(self.two_s));
        if let Some(n) = self.n {
            kv("n", n.to_string());
        }
        kv("model", match self.model { Model::Nn => "nn", Model::Nnn => "nnn" }.into());
        kv("ratio", self.ratio.to_string());
        if let Some(b) = self.boundary {
            kv("boundary", match b { Boundary::Open => "open", Boundary::Periodic => "periodic" }.into());
        }
        if let Some(c) = self.convention {
            kv("convention", match c { Convention::PauliScaled => "pauli", Convention::Raw => "raw" }.into());
        }
        kv("lambda_min", self.lambda_min.to_string());
        kv("lambda_max", self.lambda_max.to_string());
        kv("lambda_step", self.lambda_step.to_string());
        kv("lambda", self.lambda.to_string());
        kv("q_list", self.q_list.iter().map(|&q| format_q(q)).collect::<Vec<_>>().join(","));
        if let Some(t) = self.target {
            kv("target", match t {
                TargetChoice::Site(i) => format!("site:{i}"),
                TargetChoice::Block(l) => format!("block:{l}"),
                TargetChoice::Scan => "scan".into(),
            });
        }
        if !self.n_list.is_empty() {
            kv("n_list", self.n_list.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(","));
        }
        kv("mode", match self.mode {
            GammaMode::Peak => "peak".into(),
            GammaMode::Fixed(l) => format!("fixed:{l}"),
        });
        kv("out_dir", self.out_dir.display().to_string());
        kv("workers", self.workers.to_string());
        if let Some(t) = self.tol {
            kv("tol", t.to_string());
        }
        if !self.gammas.is_empty() {
            kv("gammas", self.gammas.iter().map(|(x, g)| format!("{x}:{g}")).collect::<Vec<_>>().join(","));
        }
        if !self.spin_list.is_empty() {
            kv("spin_list", self.spin_list.iter().map(|&t| format_spin(t)).collect::<Vec<_>>().join(","));
        }
        for (k, v) in [
            ("input", self.input.as_ref().map(|p| p.display().to_string())),
            ("x_column", self.x_column.clone()),
            ("y_column", self.y_column.clone()),
            ("series_column", self.series_column.clone()),
            ("title", self.title.clone()),
        ] {
            if let Some(v) = v {
                kv(k, v);
            }
        }
        s
    }
}
