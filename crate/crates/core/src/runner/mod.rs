//! Configuration-driven commands that write `data.csv`, `manifest.json` and
//! `plot.svg` into an output directory.

pub mod config;
mod oracle;
pub mod svg;
pub mod table;

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use config::{parse_config, GammaMode, Model, RunConfig, TargetChoice};
pub use oracle::{oracle_cases, OracleCase, OracleThresholds};

use crate::entanglement;
use crate::entropy::{self, EntanglementTarget, Peak};
use crate::error::{Error, Result};
use crate::lanczos::{self, LanczosConfig};
use crate::scaling::{self, ExtensivityReport, ExtrapolationFit, GammaLimit, PowerLawFit};
use crate::spin::ChainSpec;
use svg::PlotSpec;
use table::{format_num, write_atomic, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Sweep,
    Blockscan,
    Extrapolate,
    SpinPower,
    OracleCheck,
    Plot,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Sweep,
        Command::Blockscan,
        Command::Extrapolate,
        Command::SpinPower,
        Command::OracleCheck,
        Command::Plot,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Sweep => "sweep",
            Command::Blockscan => "blockscan",
            Command::Extrapolate => "extrapolate",
            Command::SpinPower => "spin-power",
            Command::OracleCheck => "oracle-check",
            Command::Plot => "plot",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::config("command", format!("unknown command `{s}`")))
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: Command,
    pub version: String,
    pub config: RunConfig,
    pub chains: Vec<ChainSpec>,
    pub solver: LanczosConfig,
    pub lambda_grid: Vec<f64>,
    pub targets: Vec<String>,
    pub wall_time_seconds: f64,
}

/// Recovers the configuration recorded in a `manifest.json`.
pub fn parse_manifest(text: &str) -> Result<RunConfig> {
    let m: Manifest = serde_json::from_str(text)?;
    Ok(m.config)
}

/// Command-specific results, mirrored in the CSV footer.
#[derive(Debug, Clone, PartialEq)]
pub enum Summary {
    Sweep {
        target: EntanglementTarget,
        peaks: Vec<(f64, Peak)>,
        degenerate_points: usize,
    },
    Blockscan {
        /// `S_q(L)` for `L = 1..N-1`, per q.
        entropies: Vec<(f64, Vec<f64>)>,
        report: Option<ExtensivityReport>,
        degenerate: bool,
    },
    Extrapolate {
        fit: ExtrapolationFit,
        lambda_star: Vec<(usize, f64)>,
    },
    SpinPower {
        gamma_infinity: Vec<(f64, f64)>,
        fit: PowerLawFit,
    },
    OracleCheck {
        checks: usize,
        failures: Vec<String>,
    },
    Plot,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunArtifacts {
    pub out_dir: PathBuf,
    pub data_csv: Option<PathBuf>,
    pub manifest: PathBuf,
    pub plot: Option<PathBuf>,
    /// Human-readable summary lines (the CSV footer).
    pub notes: Vec<String>,
    pub summary: Summary,
}

struct Writer<'a> {
    cfg: &'a RunConfig,
    command: Command,
    start: Instant,
    chains: Vec<ChainSpec>,
    grid: Vec<f64>,
    targets: Vec<String>,
}

impl<'a> Writer<'a> {
    fn new(cfg: &'a RunConfig, command: Command) -> Self {
        Writer {
            cfg,
            command,
            start: Instant::now(),
            chains: Vec::new(),
            grid: Vec::new(),
            targets: Vec::new(),
        }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.cfg.out_dir.join(name)
    }

    fn manifest(&self) -> Result<PathBuf> {
        let m = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: self.cfg.clone(),
            chains: self.chains.clone(),
            solver: self.cfg.lanczos(),
            lambda_grid: self.grid.clone(),
            targets: self.targets.clone(),
            wall_time_seconds: self.start.elapsed().as_secs_f64(),
        };
        let path = self.path("manifest.json");
        let mut json = serde_json::to_string_pretty(&m)?;
        json.push('\n');
        write_atomic(&path, json.as_bytes())?;
        Ok(path)
    }

    fn csv(&self, table: &Table) -> Result<PathBuf> {
        let path = self.path("data.csv");
        write_atomic(&path, table.to_csv().as_bytes())?;
        Ok(path)
    }

    fn plot(&self, table: &Table, spec: &PlotSpec) -> Result<PathBuf> {
        let svg = svg::render_svg(&table.to_csv(), spec)?;
        let path = self.path("plot.svg");
        write_atomic(&path, svg.as_bytes())?;
        Ok(path)
    }

    fn finish(self, table: Option<&Table>, plot: Option<PlotSpec>, summary: Summary) -> Result<RunArtifacts> {
        let data_csv = table.map(|t| self.csv(t)).transpose()?;
        let plot = match (table, plot) {
            (Some(t), Some(p)) => Some(self.plot(t, &p)?),
            _ => None,
        };
        let manifest = self.manifest()?;
        Ok(RunArtifacts {
            out_dir: self.cfg.out_dir.clone(),
            data_csv,
            manifest,
            plot,
            notes: table.map(|t| t.footer.clone()).unwrap_or_default(),
            summary,
        })
    }

    /// Keeps what was computed before a failure, then reports it.
    fn abort(self, table: &mut Table, err: Error) -> Error {
        table.note(format!("aborted: {err}"));
        if let Err(e) = self.csv(table).and_then(|_| self.manifest()) {
            return e;
        }
        err
    }
}

fn check_target(target: EntanglementTarget, spec: &ChainSpec) -> Result<()> {
    let n = spec.n_sites;
    let ok = match target {
        EntanglementTarget::Site(i) => i < n,
        EntanglementTarget::Block(l) => l >= 1 && l < n,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config("target", format!("{target} is out of range for N = {n}")))
    }
}

fn resolve_target(cfg: &RunConfig, spec: &ChainSpec) -> Result<EntanglementTarget> {
    let t = TargetChoice::resolve(cfg.target, spec)?;
    check_target(t, spec)?;
    Ok(t)
}

/// λ sweep: `lambda,q,s_q,gamma,degenerate`.
pub fn run_sweep(cfg: &RunConfig) -> Result<RunArtifacts> {
    let mut w = Writer::new(cfg, Command::Sweep);
    let spec = cfg.chain()?;
    let target = resolve_target(cfg, &spec)?;
    let grid = cfg.grid()?;
    let opts = cfg.sweep_options()?;
    w.chains.push(spec);
    w.grid = grid.clone();
    w.targets.push(target.to_string());

    let mut table = Table::new(&["lambda", "q", "s_q", "gamma", "degenerate"]);
    let (points, err) = entropy::sweep_points(&spec, &grid, &cfg.q_list, &[target], &opts);
    if let Some(e) = err {
        for (qi, &q) in cfg.q_list.iter().enumerate() {
            for p in &points {
                table.push(vec![
                    format_num(p.lambda),
                    format_num(q),
                    format_num(p.entropies[0][qi]),
                    "nan".into(),
                    (p.degenerate as u8).to_string(),
                ]);
            }
        }
        return Err(w.abort(&mut table, e));
    }

    let mut peaks = Vec::with_capacity(cfg.q_list.len());
    for (qi, &q) in cfg.q_list.iter().enumerate() {
        let values: Vec<f64> = points.iter().map(|p| p.entropies[0][qi]).collect();
        let gamma = entropy::derivative(&grid, &values)?;
        for ((p, s), g) in points.iter().zip(&values).zip(&gamma) {
            table.push(vec![
                format_num(p.lambda),
                format_num(q),
                format_num(*s),
                format_num(*g),
                (p.degenerate as u8).to_string(),
            ]);
        }
        let peak = entropy::locate_peak(&entropy::GammaCurve {
            q,
            target,
            lambda_grid: grid.clone(),
            gamma,
        })?;
        table.note(format!(
            "peak q={} lambda_star={} gamma_star={}{}",
            format_num(q),
            format_num(peak.lambda),
            format_num(peak.gamma),
            if peak.at_boundary { " warning=boundary-peak" } else { "" }
        ));
        peaks.push((q, peak));
    }
    let degenerate_points = points.iter().filter(|p| p.degenerate).count();
    if degenerate_points > 0 {
        table.note(format!("degenerate_ground_states={degenerate_points}"));
    }
    let plot = PlotSpec {
        x: "lambda".into(),
        y: "gamma".into(),
        series: Some("q".into()),
        title: cfg.title.clone().unwrap_or_else(|| format!("Gamma_q, N = {}, {target}", spec.n_sites)),
    };
    w.finish(
        Some(&table),
        Some(plot),
        Summary::Sweep {
            target,
            peaks,
            degenerate_points,
        },
    )
}

/// Block entropies at one λ: `l,q,s_q`, with the extensivity report.
pub fn run_blockscan(cfg: &RunConfig) -> Result<RunArtifacts> {
    let mut w = Writer::new(cfg, Command::Blockscan);
    let spec = cfg.chain()?;
    if !matches!(cfg.target, None | Some(TargetChoice::Scan)) {
        return Err(Error::config("target", "blockscan scans every block; use target=scan or omit it"));
    }
    let n = spec.n_sites;
    w.chains.push(spec);
    w.grid = vec![cfg.lambda];
    w.targets.push("scan".into());

    let mut table = Table::new(&["l", "q", "s_q"]);
    let solved = lanczos::ground_state(&spec, cfg.lambda, &cfg.sweep_options()?.lanczos).map_err(|e| {
        Error::SweepAborted {
            lambda: cfg.lambda,
            source: Box::new(e),
        }
    });
    let gs = match solved {
        Ok(gs) => gs,
        Err(e) => return Err(w.abort(&mut table, e)),
    };
    let mut entropies: Vec<(f64, Vec<f64>)> = cfg.q_list.iter().map(|&q| (q, Vec::with_capacity(n - 1))).collect();
    for l in 1..n {
        let p = entanglement::block_probabilities(&gs.vector, &spec, l)?;
        for (q, values) in entropies.iter_mut() {
            values.push(entropy::tsallis_entropy(&p, *q)?);
        }
    }
    for (q, values) in &entropies {
        for (l, s) in values.iter().enumerate() {
            table.push(vec![(l + 1).to_string(), format_num(*q), format_num(*s)]);
        }
    }
    table.note(format!(
        "ground_state lambda={} energy={} degenerate={}",
        format_num(cfg.lambda),
        format_num(gs.energy),
        gs.degenerate
    ));
    let asym = entropies
        .iter()
        .flat_map(|(_, v)| (0..v.len()).map(move |i| (v[i] - v[v.len() - 1 - i]).abs()))
        .fold(0.0f64, f64::max);
    table.note(format!("bipartition_asymmetry max={}", format_num(asym)));
    let report = match scaling::extensivity_report(&entropies, n) {
        Ok(r) => {
            for rec in &r.records {
                table.note(format!(
                    "extensivity q={} slope={} intercept={} r_squared={} mean_second_difference={}",
                    format_num(rec.q),
                    format_num(rec.slope),
                    format_num(rec.intercept),
                    format_num(rec.r_squared),
                    format_num(rec.mean_second_difference)
                ));
            }
            table.note(format!(
                "linearity_order q={}",
                r.ordering.iter().map(|&q| format_num(q)).collect::<Vec<_>>().join(";")
            ));
            Some(r)
        }
        Err(Error::RangeTooShort(_)) => {
            table.note("extensivity skipped: N < 6");
            None
        }
        Err(e) => return Err(e),
    };
    let plot = PlotSpec {
        x: "l".into(),
        y: "s_q".into(),
        series: Some("q".into()),
        title: cfg
            .title
            .clone()
            .unwrap_or_else(|| format!("S_q(L), N = {n}, lambda = {}", format_num(cfg.lambda))),
    };
    w.finish(
        Some(&table),
        Some(plot),
        Summary::Blockscan {
            entropies,
            report,
            degenerate: gs.degenerate,
        },
    )
}

fn single_q(cfg: &RunConfig) -> Result<f64> {
    match cfg.q_list.as_slice() {
        [q] => Ok(*q),
        _ => Err(Error::config("q_list", "this command takes exactly one q")),
    }
}

/// `Γ_q` per chain length for spin `two_s`, and `λ*` per length in peak mode.
pub fn gamma_series(cfg: &RunConfig, two_s: u32, q: f64) -> Result<(Vec<(usize, f64)>, Vec<(usize, f64)>)> {
    if cfg.n_list.is_empty() {
        return Err(Error::config("n_list", "required"));
    }
    let opts = cfg.sweep_options()?;
    let mut gammas = Vec::with_capacity(cfg.n_list.len());
    let mut stars = Vec::new();
    for &n in &cfg.n_list {
        let spec = cfg.chain_for(two_s, n)?;
        let target = resolve_target(cfg, &spec)?;
        let g = match cfg.mode {
            GammaMode::Peak => {
                let pg = entropy::gamma_at_peak(&spec, &cfg.grid()?, &[q], target, &opts)?;
                stars.push((n, pg.lambda_star));
                pg.gamma[0]
            }
            GammaMode::Fixed(lc) => entropy::gamma_at(&spec, lc, cfg.lambda_step, &[q], target, &opts.lanczos)?[0],
        };
        gammas.push((n, g));
    }
    Ok((gammas, stars))
}

fn fit_notes(table: &mut Table, fit: &ExtrapolationFit) {
    table.note(format!(
        "fit q={} a_q={} slope={} intercept={} intercept_stderr={} r_squared={} gamma_infinity={}",
        format_num(fit.q),
        format_num(fit.a_q),
        format_num(fit.slope),
        format_num(fit.intercept),
        format_num(fit.intercept_stderr),
        format_num(fit.r_squared),
        match fit.gamma_infinity {
            GammaLimit::Finite(g) => format_num(g),
            GammaLimit::Divergent => "divergent".into(),
        }
    ));
}

/// Finite-size extrapolation of `1/Γ_q`: `n,gamma,abscissa` plus fit footer.
pub fn run_extrapolate(cfg: &RunConfig) -> Result<RunArtifacts> {
    let mut w = Writer::new(cfg, Command::Extrapolate);
    let q = single_q(cfg)?;
    let (points, stars) = if cfg.gammas.is_empty() {
        for &n in &cfg.n_list {
            w.chains.push(cfg.chain_for(cfg.two_s, n)?);
        }
        if cfg.mode == GammaMode::Peak {
            w.grid = cfg.grid()?;
        }
        gamma_series(cfg, cfg.two_s, q)?
    } else {
        let pts = cfg
            .gammas
            .iter()
            .map(|&(n, g)| {
                if n >= 2.0 && n.fract() == 0.0 {
                    Ok((n as usize, g))
                } else {
                    Err(Error::config("gammas", format!("chain length {n} is not an integer >= 2")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        (pts, Vec::new())
    };
    let fit = scaling::fit_gamma_extrapolation(&points, q)?;
    let mut table = Table::new(&["n", "gamma", "abscissa"]);
    for (&(n, g), x) in points.iter().zip(&fit.abscissa) {
        table.push(vec![n.to_string(), format_num(g), format_num(*x)]);
    }
    fit_notes(&mut table, &fit);
    for (n, l) in &stars {
        table.note(format!("lambda_star n={n} value={}", format_num(*l)));
    }
    let plot = PlotSpec {
        x: "abscissa".into(),
        y: "gamma".into(),
        series: None,
        title: cfg.title.clone().unwrap_or_else(|| format!("Gamma_q vs (1/ln_q N)^a_q, q = {}", format_num(q))),
    };
    w.finish(Some(&table), Some(plot), Summary::Extrapolate { fit, lambda_star: stars })
}

/// `Γ_∞(S)` per spin and the power-law fit: `s,gamma_infinity` plus footer.
pub fn run_spin_power(cfg: &RunConfig) -> Result<RunArtifacts> {
    let mut w = Writer::new(cfg, Command::SpinPower);
    let mut table = Table::new(&["s", "gamma_infinity"]);
    let points: Vec<(f64, f64)> = if !cfg.gammas.is_empty() {
        cfg.gammas.clone()
    } else {
        if cfg.spin_list.is_empty() {
            return Err(Error::config("spin_list", "required unless gammas are given"));
        }
        let q = single_q(cfg)?;
        let mut pts = Vec::with_capacity(cfg.spin_list.len());
        for &two_s in &cfg.spin_list {
            for &n in &cfg.n_list {
                w.chains.push(cfg.chain_for(two_s, n)?);
            }
            let (series, _) = gamma_series(cfg, two_s, q)?;
            let fit = scaling::fit_gamma_extrapolation(&series, q)?;
            fit_notes(&mut table, &fit);
            match fit.gamma_infinity {
                GammaLimit::Finite(g) => pts.push((two_s as f64 / 2.0, g)),
                GammaLimit::Divergent => {
                    return Err(Error::InvalidInput(format!(
                        "extrapolated gamma diverges for S = {}",
                        config::format_spin(two_s)
                    )))
                }
            }
        }
        if cfg.mode == GammaMode::Peak {
            w.grid = cfg.grid()?;
        }
        pts
    };
    let fit = scaling::fit_spin_power_law(&points)?;
    for &(s, g) in &points {
        table.push(vec![format_num(s), format_num(g)]);
    }
    table.note(format!(
        "power_law c={} beta={} r_squared={}",
        format_num(fit.c),
        format_num(fit.beta),
        format_num(fit.r_squared)
    ));
    let plot = PlotSpec {
        x: "s".into(),
        y: "gamma_infinity".into(),
        series: None,
        title: cfg.title.clone().unwrap_or_else(|| "Gamma_inf(S)".into()),
    };
    w.finish(
        Some(&table),
        Some(plot),
        Summary::SpinPower {
            gamma_infinity: points,
            fit,
        },
    )
}

/// Checks matvec, eigensolver and reduced spectra against dense oracles for
/// every chain of dimension ≤ 1024. Fails with exit code 4 on any violation.
pub fn run_oracle_check(cfg: &RunConfig) -> Result<RunArtifacts> {
    let w = Writer::new(cfg, Command::OracleCheck);
    let thresholds = cfg.tol.map_or_else(OracleThresholds::default, OracleThresholds::uniform);
    let mut table = Table::new(&[
        "two_s", "n", "model", "boundary", "convention", "check", "error", "threshold", "pass",
    ]);
    let mut failures = Vec::new();
    let mut checks = 0;
    for case in oracle_cases() {
        for r in oracle::run_case(&case, &thresholds)? {
            checks += 1;
            if !r.pass {
                failures.push(format!("{} {}", case.label(), r.check));
            }
            table.push(vec![
                case.spec.two_s.to_string(),
                case.spec.n_sites.to_string(),
                case.model_name().into(),
                case.boundary_name().into(),
                case.convention_name().into(),
                r.check.into(),
                format_num(r.error),
                format_num(r.threshold),
                (r.pass as u8).to_string(),
            ]);
        }
    }
    table.note(format!("checks={checks} failures={}", failures.len()));
    for f in &failures {
        table.note(format!("failed {f}"));
    }
    let out = w.finish(
        Some(&table),
        None,
        Summary::OracleCheck {
            checks,
            failures: failures.clone(),
        },
    )?;
    if failures.is_empty() {
        Ok(out)
    } else {
        Err(Error::OracleFailure(format!(
            "{} of {checks} checks failed, first: {}",
            failures.len(),
            failures[0]
        )))
    }
}

/// Renders `input` to `out_dir/plot.svg`.
pub fn run_plot(cfg: &RunConfig) -> Result<RunArtifacts> {
    let w = Writer::new(cfg, Command::Plot);
    let input = cfg.input.as_ref().ok_or_else(|| Error::config("input", "required"))?;
    let spec = PlotSpec {
        x: cfg.x_column.clone().ok_or_else(|| Error::config("x_column", "required"))?,
        y: cfg.y_column.clone().ok_or_else(|| Error::config("y_column", "required"))?,
        series: cfg.series_column.clone(),
        title: cfg.title.clone().unwrap_or_else(|| {
            input.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
        }),
    };
    let csv = std::fs::read_to_string(input)?;
    let svg = svg::render_svg(&csv, &spec)?;
    let path = w.path("plot.svg");
    write_atomic(&path, svg.as_bytes())?;
    let mut out = w.finish(None, None, Summary::Plot)?;
    out.plot = Some(path);
    Ok(out)
}

pub fn run(command: Command, cfg: &RunConfig) -> Result<RunArtifacts> {
    match command {
        Command::Sweep => run_sweep(cfg),
        Command::Blockscan => run_blockscan(cfg),
        Command::Extrapolate => run_extrapolate(cfg),
        Command::SpinPower => run_spin_power(cfg),
        Command::OracleCheck => run_oracle_check(cfg),
        Command::Plot => run_plot(cfg),
    }
}

/// Reads a config file and runs `command`.
pub fn run_file(command: Command, path: &Path) -> Result<RunArtifacts> {
    let text = std::fs::read_to_string(path)?;
    run(command, &parse_config(&text)?)
}
