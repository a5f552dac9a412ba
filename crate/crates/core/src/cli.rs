//! Batch experiment runner behind the `inflap` binary.
//!
//! Every subcommand resolves one [`ExperimentConfig`] from built-in
//! defaults, an optional keyed config file, the `INFLAP_OUT_DIR` environment
//! variable (output directory only) and command-line flags, in increasing
//! priority. All reports are computed in memory first; files are written only
//! once the whole run has succeeded, so a bad config never leaves partial
//! output behind.
//!
//! Exit codes: `0` all gated checks pass, `1` a gated check failed, `2`
//! usage or config error, `3` solver divergence.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analyzer::{
    gehring_probe, negative_power_scan, predicted_negative_power_verdict, predicted_verdict, sample_family,
    sobolev_scan, Exclusion,
};
use crate::error::{Error, Result};
use crate::field::{io::write_field, Grid2D, Region, ScalarField2D};
use crate::identities::{check_determinant_identity, default_mask_threshold};
use crate::oned::{degenerate_limit_check, residual_1d, solve_1d, write_solution_csv, OneDProblem};
use crate::problems;
use crate::viscous::{continuation_from, solve_viscous, ViscousRunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_GATE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DIVERGENCE: i32 = 3;

/// Environment variable overriding the output directory.
pub const OUT_DIR_ENV: &str = "INFLAP_OUT_DIR";

/// Pinned bound for the structural determinant identity on polynomials.
pub const DETERMINANT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "inflap", version, about = "Experiments for -Δ∞u = f")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-dimensional solve by shooting.
    Solve1d(Overrides),
    /// Two-dimensional vanishing-viscosity solve.
    Solve2d(Overrides),
    /// Determinant identity on seeded random quartic polynomials.
    VerifyIdentities(Overrides),
    /// Mesh-refinement scan of D|Du|^α in L^p on an exact solution.
    RegularityScan(Overrides),
    /// ε-continuation distances of the viscous solver.
    ConvergenceStudy(Overrides),
    /// Higher-integrability probe of D|Du|^α for exponents in [2, 3].
    GehringProbe(Overrides),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve1d(_) => "solve1d",
            Command::Solve2d(_) => "solve2d",
            Command::VerifyIdentities(_) => "verify-identities",
            Command::RegularityScan(_) => "regularity-scan",
            Command::ConvergenceStudy(_) => "convergence-study",
            Command::GehringProbe(_) => "gehring-probe",
        }
    }

    fn overrides(&self) -> &Overrides {
        match self {
            Command::Solve1d(o)
            | Command::Solve2d(o)
            | Command::VerifyIdentities(o)
            | Command::RegularityScan(o)
            | Command::ConvergenceStudy(o)
            | Command::GehringProbe(o) => o,
        }
    }
}

#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    /// Keyed config file (`key = value`, optional `[command]` section).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub problem: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Exponent for the `∫|Du|^s` scan.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    /// Comma-separated exponents.
    #[arg(long)]
    pub q_list: Option<String>,
    /// Nodes per side.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated, decreasing.
    #[arg(long)]
    pub eps_schedule: Option<String>,
    /// Comma-separated `k` for spacings `h = 2^-k`.
    #[arg(long)]
    pub meshes: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Degeneracy threshold on |Du|; default 2 h^(1/4).
    #[arg(long)]
    pub mask: Option<f64>,
    #[arg(long)]
    pub mollify_eps: Option<f64>,
}

/// Fully resolved run parameters; echoed into the manifest.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: String,
    pub problem: String,
    pub alpha: f64,
    pub p: f64,
    pub kappa: f64,
    pub tau: f64,
    pub s: Option<f64>,
    pub q_list: Vec<f64>,
    pub n: usize,
    pub eps_schedule: Vec<f64>,
    pub meshes: Vec<i32>,
    pub seed: u64,
    pub count: usize,
    pub out_dir: PathBuf,
    pub tol: f64,
    pub max_iters: usize,
    pub mask: Option<f64>,
    pub mollify_eps: f64,
}

impl ExperimentConfig {
    pub fn defaults(command: &str) -> Self {
        let (problem, n, tol) = match command {
            "solve1d" => ("sharp-1d", 2049, 1e-13),
            "verify-identities" => ("random-quartic", 65, DETERMINANT_TOLERANCE),
            _ => ("sharp-w", 65, 1e-6),
        };
        Self {
            command: command.to_string(),
            problem: problem.to_string(),
            alpha: if command == "gehring-probe" { 2.0 } else { 1.5 },
            p: 2.0,
            kappa: 0.0,
            tau: 1.0,
            s: None,
            q_list: vec![2.0, 2.25, 2.5, 2.75, 3.0],
            n,
            eps_schedule: ViscousRunConfig::geometric_schedule(0.5, 0.5, 10),
            meshes: (5..=10).collect(),
            seed: 0,
            count: 100,
            out_dir: PathBuf::from("out"),
            tol,
            max_iters: 2_000_000,
            mask: None,
            mollify_eps: 0.0,
        }
    }
}

/// `key = value` lines, `#`/`;` comments, `[section]` headers. Only the
/// section named after `command` may appear. Empty files, unknown or
/// repeated keys and malformed lines are errors.
pub fn parse_config(text: &str, command: &str) -> Result<BTreeMap<String, (String, usize)>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("line {line_no}: unterminated section header")))?
                .trim();
            if name != command {
                return Err(Error::Parse(format!(
                    "line {line_no}: section [{name}] does not apply to {command}"
                )));
            }
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected `key = value`")))?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Parse(format!("line {line_no}: unknown key `{key}`")));
        }
        if value.is_empty() {
            return Err(Error::Parse(format!("line {line_no}: empty value for `{key}`")));
        }
        if out.insert(key.clone(), (value, line_no)).is_some() {
            return Err(Error::Parse(format!("line {line_no}: duplicate key `{key}`")));
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("config file has no settings".into()));
    }
    Ok(out)
}

const KEYS: [&str; 17] = [
    "problem",
    "alpha",
    "p",
    "kappa",
    "tau",
    "s",
    "q_list",
    "n",
    "eps_schedule",
    "meshes",
    "seed",
    "count",
    "out_dir",
    "tol",
    "max_iters",
    "mask",
    "mollify_eps",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: Option<usize>) -> Result<T> {
    value.trim().parse().map_err(|_| {
        let at = line.map_or_else(|| "flag".to_string(), |l| format!("line {l}"));
        Error::Parse(format!("{at}: invalid value {value:?} for `{key}`"))
    })
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str, line: Option<usize>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|v| parse_value(key, v, line))
        .collect()
}

fn apply(cfg: &mut ExperimentConfig, key: &str, value: &str, line: Option<usize>) -> Result<()> {
    match key {
        "problem" => cfg.problem = value.to_string(),
        "alpha" => cfg.alpha = parse_value(key, value, line)?,
        "p" => cfg.p = parse_value(key, value, line)?,
        "kappa" => cfg.kappa = parse_value(key, value, line)?,
        "tau" => cfg.tau = parse_value(key, value, line)?,
        "s" => cfg.s = Some(parse_value(key, value, line)?),
        "q_list" => cfg.q_list = parse_list(key, value, line)?,
        "n" => cfg.n = parse_value(key, value, line)?,
        "eps_schedule" => cfg.eps_schedule = parse_list(key, value, line)?,
        "meshes" => cfg.meshes = parse_list(key, value, line)?,
        "seed" => cfg.seed = parse_value(key, value, line)?,
        "count" => cfg.count = parse_value(key, value, line)?,
        "out_dir" => cfg.out_dir = PathBuf::from(value),
        "tol" => cfg.tol = parse_value(key, value, line)?,
        "max_iters" => cfg.max_iters = parse_value(key, value, line)?,
        "mask" => cfg.mask = Some(parse_value(key, value, line)?),
        "mollify_eps" => cfg.mollify_eps = parse_value(key, value, line)?,
        _ => return Err(Error::Parse(format!("unknown key `{key}`"))),
    }
    Ok(())
}

/// Merges defaults, config file, environment and flags.
pub fn resolve(command: &Command, env_out_dir: Option<String>) -> Result<ExperimentConfig> {
    let name = command.name();
    let o = command.overrides();
    let mut cfg = ExperimentConfig::defaults(name);
    if let Some(path) = &o.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        for (key, (value, line)) in parse_config(&text, name)? {
            apply(&mut cfg, &key, &value, Some(line))?;
        }
    }
    if let Some(dir) = env_out_dir {
        cfg.out_dir = PathBuf::from(dir);
    }
    let flags: [(&str, Option<String>); 17] = [
        ("problem", o.problem.clone()),
        ("alpha", o.alpha.map(|v| v.to_string())),
        ("p", o.p.map(|v| v.to_string())),
        ("kappa", o.kappa.map(|v| v.to_string())),
        ("tau", o.tau.map(|v| v.to_string())),
        ("s", o.s.map(|v| v.to_string())),
        ("q_list", o.q_list.clone()),
        ("n", o.n.map(|v| v.to_string())),
        ("eps_schedule", o.eps_schedule.clone()),
        ("meshes", o.meshes.clone()),
        ("seed", o.seed.map(|v| v.to_string())),
        ("count", o.count.map(|v| v.to_string())),
        ("out_dir", o.out_dir.as_ref().map(|v| v.display().to_string())),
        ("tol", o.tol.map(|v| v.to_string())),
        ("max_iters", o.max_iters.map(|v| v.to_string())),
        ("mask", o.mask.map(|v| v.to_string())),
        ("mollify_eps", o.mollify_eps.map(|v| v.to_string())),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            apply(&mut cfg, key, &v, None)?;
        }
    }
    Ok(cfg)
}

/// Files produced by a run, plus whether every gated check passed.
#[derive(Debug, Default)]
pub struct RunOutput {
    pub artifacts: Vec<(String, String)>,
    pub passed: bool,
    /// One line per gated check.
    pub checks: Vec<String>,
}

impl RunOutput {
    fn gate(&mut self, name: &str, ok: bool, detail: String) {
        self.checks.push(format!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" }));
        self.passed &= ok;
    }

    fn add(&mut self, name: &str, body: String) {
        self.artifacts.push((name.to_string(), body));
    }
}

fn to_text(write: impl FnOnce(&mut Vec<u8>) -> Result<()>) -> Result<String> {
    let mut buf = Vec::new();
    write(&mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

fn json(value: &impl Serialize) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Error::Parse(e.to_string()))
}

/// Executes the experiment without touching the file system.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunOutput> {
    let mut out = RunOutput {
        passed: true,
        ..Default::default()
    };
    match cfg.command.as_str() {
        "solve1d" => run_solve1d(cfg, &mut out)?,
        "solve2d" => run_solve2d(cfg, &mut out, false)?,
        "convergence-study" => run_solve2d(cfg, &mut out, true)?,
        "verify-identities" => run_identities(cfg, &mut out)?,
        "regularity-scan" => run_regularity(cfg, &mut out)?,
        "gehring-probe" => run_gehring(cfg, &mut out)?,
        other => return Err(Error::Parameter(format!("unknown command {other}"))),
    }
    Ok(out)
}

struct OneDSpec {
    f: fn(f64) -> f64,
    u0: f64,
    u1: f64,
    exact: Option<fn(f64) -> f64>,
}

fn oned_problem(name: &str) -> Result<OneDSpec> {
    Ok(match name {
        "sharp-1d" => OneDSpec {
            f: |_| problems::SHARP_SOURCE,
            u0: 0.0,
            u1: -1.0,
            exact: Some(|t| -t.powf(4.0 / 3.0)),
        },
        "linear-source" => OneDSpec {
            f: |t| 1.0 + t,
            u0: 0.0,
            u1: 0.0,
            exact: None,
        },
        "constant-negative" => OneDSpec {
            f: |_| -3.0,
            u0: 0.0,
            u1: 0.0,
            exact: Some(|t| 0.75 * 9f64.cbrt() * ((t - 0.5).abs().powf(4.0 / 3.0) - 0.5f64.powf(4.0 / 3.0))),
        },
        other => {
            return Err(Error::Parameter(format!(
                "unknown 1-D problem {other:?}; known: sharp-1d, linear-source, constant-negative"
            )))
        }
    })
}

fn run_solve1d(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let case = oned_problem(&cfg.problem)?;
    let problem = OneDProblem::from_fn(cfg.n, case.f, case.u0, case.u1)?;
    let sol = solve_1d(&problem, cfg.tol)?;
    let residual = residual_1d(&sol, cfg.mask.unwrap_or(0.0));
    out.gate(
        "closed-form residual",
        residual.analytic_max_rel < 1e-10,
        format!("{:.3e}", residual.analytic_max_rel),
    );
    let mut summary = serde_json::Map::new();
    summary.insert("c".into(), sol.c().into());
    summary.insert("t0".into(), serde_json::to_value(sol.t0()).unwrap_or_default());
    summary.insert("bisection_iters".into(), sol.bisection_iters().into());
    summary.insert("residual".into(), serde_json::to_value(&residual).unwrap_or_default());
    if let Some(exact) = case.exact {
        let err = sol
            .nodes()
            .iter()
            .zip(sol.u())
            .fold(0.0f64, |m, (&t, &u)| m.max((u - exact(t)).abs()));
        out.gate("sup error vs exact", err <= 1e-4, format!("{err:.3e}"));
        summary.insert("max_error".into(), err.into());
    }
    if sol.t0().is_some_and(|t| t.interior) {
        let lim = degenerate_limit_check(&sol)?;
        out.gate("degenerate limit", lim.deviation <= 0.02, format!("{:.3e}", lim.deviation));
        summary.insert("degenerate_limit".into(), serde_json::to_value(&lim).unwrap_or_default());
    }
    out.add("solution.csv", to_text(|b| write_solution_csv(&sol, b))?);
    out.add("summary.json", json(&summary)?);
    Ok(())
}

#[derive(Serialize)]
struct Solve2dSummary {
    problem: String,
    n: usize,
    converged: bool,
    eps_final: f64,
    residual_max: f64,
    error_vs_exact: Option<f64>,
    stage_errors: Vec<f64>,
}

fn run_solve2d(cfg: &ExperimentConfig, out: &mut RunOutput, study: bool) -> Result<()> {
    let problem = problems::lookup(&cfg.problem)?;
    let grid = problem.grid(cfg.n)?;
    let f = problem.source_field(grid)?;
    let g = problem.boundary_field(grid)?;
    let mut vc = ViscousRunConfig::new(cfg.eps_schedule.clone(), cfg.tol, cfg.max_iters);
    vc.mollify_eps = cfg.mollify_eps;
    let sol = solve_viscous(&f, &g, &vc, None)?;
    out.gate("all stages converged", sol.converged, format!("residual {:.3e}", sol.residual_max));
    let exact = problem.exact_field(grid).transpose()?;
    let stage_errors: Vec<f64> = match &exact {
        Some(w) => sol
            .stage_fields
            .iter()
            .map(|u| u.max_abs_diff_interior(w))
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let table = continuation_from(&sol);
    if study {
        out.gate(
            "stage distances strictly decreasing",
            table.strictly_decreasing() && !table.rows.is_empty(),
            format!("{} rows", table.rows.len()),
        );
        if !stage_errors.is_empty() {
            let dec = stage_errors.windows(2).all(|w| w[1] < w[0]);
            out.gate("error vs exact decreasing", dec, format!("final {:.3e}", stage_errors[stage_errors.len() - 1]));
        }
    }
    let mut cont = String::from("eps,distance\n");
    for r in &table.rows {
        let _ = writeln!(cont, "{:?},{:?}", r.eps, r.distance);
    }
    out.add("continuation.csv", cont);
    out.add("run_log.csv", to_text(|b| sol.write_run_log(b))?);
    if !study {
        out.add("solution.csv", to_text(|b| write_field(&sol.u_eps, b))?);
    }
    out.add(
        "summary.json",
        json(&Solve2dSummary {
            problem: cfg.problem.clone(),
            n: cfg.n,
            converged: sol.converged,
            eps_final: sol.eps_final,
            residual_max: sol.residual_max,
            error_vs_exact: stage_errors.last().copied(),
            stage_errors,
        })?,
    );
    Ok(())
}

/// Seeded random quartic `Σ_{a+b<=4} c_ab x^a y^b`, coefficients in `[-1, 1]`.
pub fn random_quartic(rng: &mut ChaCha8Rng) -> Vec<(i32, i32, f64)> {
    let mut terms = Vec::with_capacity(15);
    for total in 0..=4 {
        for a in 0..=total {
            terms.push((a, total - a, rng.gen_range(-1.0..1.0)));
        }
    }
    terms
}

pub fn sample_polynomial(grid: Grid2D, terms: &[(i32, i32, f64)]) -> Result<ScalarField2D> {
    ScalarField2D::from_fn(grid, |x, y| {
        terms.iter().map(|&(a, b, c)| c * x.powi(a) * y.powi(b)).sum()
    })
}

fn run_identities(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let grid = Grid2D::square(cfg.n, -1.0, 1.0)?;
    let mask = cfg.mask.unwrap_or_else(|| default_mask_threshold(grid.h()));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut csv = String::from("index,max_rel_error,mean_rel_error,excluded_fraction,checked_nodes\n");
    let mut worst = 0.0f64;
    let mut reports = Vec::with_capacity(cfg.count);
    for k in 0..cfg.count {
        let terms = random_quartic(&mut rng);
        let u = sample_polynomial(grid, &terms)?;
        let rep = check_determinant_identity(&u, 0.0, None, mask)?;
        let _ = writeln!(
            csv,
            "{k},{:?},{:?},{:?},{}",
            rep.max_rel_error, rep.mean_rel_error, rep.excluded_fraction, rep.checked_nodes
        );
        worst = worst.max(rep.max_rel_error);
        reports.push(rep);
    }
    out.gate(
        "determinant identity",
        worst < cfg.tol,
        format!("worst {worst:.3e} vs {:.1e}", cfg.tol),
    );
    out.add("identities.csv", csv);
    out.add("reports.json", json(&reports)?);
    Ok(())
}

fn exact_family(cfg: &ExperimentConfig) -> Result<(Vec<ScalarField2D>, Region, Exclusion, bool)> {
    let problem = problems::lookup(&cfg.problem)?;
    let exact = problem.exact.ok_or_else(|| {
        Error::Parameter(format!("{} has no exact solution to scan", problem.name))
    })?;
    if cfg.meshes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("meshes must be increasing exponents".into()));
    }
    let spacings: Vec<f64> = cfg.meshes.iter().map(|&k| 2f64.powi(-k)).collect();
    let family = sample_family(exact, 0.75, &spacings)?;
    let region = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
    let sharp = problem.name == "sharp-w";
    let exclusion = if sharp { Exclusion::Ridge { x: 0.0 } } else { Exclusion::None };
    Ok((family, region, exclusion, sharp))
}

fn run_regularity(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let (family, region, exclusion, sharp) = exact_family(cfg)?;
    let rep = sobolev_scan(&family, cfg.alpha, cfg.p, cfg.kappa, &region, &exclusion)?;
    if sharp && cfg.kappa == 0.0 {
        let predicted = predicted_verdict(cfg.alpha, cfg.p);
        out.gate(
            "verdict matches closed form",
            rep.verdict.same_class(&predicted),
            format!("{} vs {}", rep.verdict.label(), predicted.label()),
        );
    }
    out.add("scan.csv", to_text(|b| rep.write_csv(b, true))?);
    out.add("summary.json", rep.summary_json()? + "\n");
    out.add("scan_data.dat", to_text(|b| rep.write_data_gnuplot(b))?);
    out.add("scan_fit.dat", to_text(|b| rep.write_fit_gnuplot(b))?);
    if let Some(s) = cfg.s {
        let neg = negative_power_scan(&family, s, &region, &exclusion)?;
        if sharp {
            let predicted = predicted_negative_power_verdict(s);
            out.gate(
                "power-integral verdict matches closed form",
                neg.verdict.same_class(&predicted),
                format!("{} vs {}", neg.verdict.label(), predicted.label()),
            );
        }
        out.add("power_scan.csv", to_text(|b| neg.write_csv(b, true))?);
        out.add("power_summary.json", neg.summary_json()? + "\n");
        out.add("power_data.dat", to_text(|b| neg.write_data_gnuplot(b))?);
        out.add("power_fit.dat", to_text(|b| neg.write_fit_gnuplot(b))?);
    }
    Ok(())
}

fn run_gehring(cfg: &ExperimentConfig, out: &mut RunOutput) -> Result<()> {
    let (family, region, exclusion, sharp) = exact_family(cfg)?;
    let rep = gehring_probe(&family, cfg.alpha, &region, &exclusion, &cfg.q_list, sharp)?;
    // exploratory: reported, not gated
    for row in &rep.rows {
        out.checks.push(format!(
            "INFO q = {}: {}{}",
            row.q,
            row.scan.verdict.label(),
            row.predicted.map_or(String::new(), |p| format!(" (closed form {})", p.label()))
        ));
    }
    out.add("gehring.csv", to_text(|b| rep.write_csv(b))?);
    out.add("summary.json", json(&rep)?);
    Ok(())
}

#[derive(Serialize)]
struct Manifest<'a> {
    timestamp_unix: u64,
    config: &'a ExperimentConfig,
    artifacts: Vec<&'a str>,
    passed: bool,
    checks: &'a [String],
}

/// Writes all artifacts and the manifest into `cfg.out_dir`.
pub fn write_outputs(cfg: &ExperimentConfig, run: &RunOutput) -> Result<()> {
    let dir: &Path = &cfg.out_dir;
    std::fs::create_dir_all(dir)?;
    for (name, body) in &run.artifacts {
        std::fs::write(dir.join(name), body)?;
    }
    let timestamp_unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let manifest = Manifest {
        timestamp_unix,
        config: cfg,
        artifacts: run.artifacts.iter().map(|(n, _)| n.as_str()).collect(),
        passed: run.passed,
        checks: &run.checks,
    };
    std::fs::write(dir.join("manifest.json"), json(&manifest)?)?;
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Parameter(_) => EXIT_USAGE,
        Error::Divergence { .. } => EXIT_DIVERGENCE,
        _ => EXIT_GATE,
    }
}

/// Parses `args` (including the program name), runs and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
        }
    };
    let cfg = match resolve(&cli.command, std::env::var(OUT_DIR_ENV).ok()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("inflap: {e}");
            return exit_code(&e);
        }
    };
    let run = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("inflap {}: {e}", cfg.command);
            return exit_code(&e);
        }
    };
    if let Err(e) = write_outputs(&cfg, &run) {
        eprintln!("inflap: writing {}: {e}", cfg.out_dir.display());
        return EXIT_USAGE;
    }
    for line in &run.checks {
        println!("{line}");
    }
    if run.passed {
        EXIT_PASS
    } else {
        EXIT_GATE
    }
}
