//! One-dimensional viscosity solutions of `-(u')² u'' = f` on `[0, 1]`.
//!
//! For `f` of constant sign every viscosity solution has the closed form
//!
//! ```text
//! u(t) = u(0) + ∫_0^t cbrt( F(s) - c ) ds,    F(s) = ∫_0^s -3 f(r) dr,
//! ```
//!
//! with the constant `c` fixed by the right boundary value. `G(c) = u(0) +
//! ∫_0^1 cbrt(F - c) - u(1)` is strictly decreasing, so `c` is found by
//! bisection.
//!
//! `F` is accumulated with the trapezoid rule. The outer integral is
//! evaluated cell by cell with `F` taken linear on each cell, where the
//! cube root integrates in closed form; that rule is exact whenever `f` is
//! piecewise constant between nodes and stays second order across the
//! degenerate point, where the integrand is only Hölder-1/3.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{extrapolate_to_zero, pairwise_sum};
use crate::rates::{classify, RateFit};

const MAX_BRACKET_EXPANSIONS: usize = 200;

/// Right-hand side samples and boundary values on `n` uniform nodes of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneDProblem {
    f: Vec<f64>,
    u0: f64,
    u1: f64,
}

impl OneDProblem {
    pub fn new(f: Vec<f64>, u0: f64, u1: f64) -> Result<Self> {
        if f.len() < 3 {
            return Err(Error::Dimension(format!(
                "need at least 3 nodes, got {}",
                f.len()
            )));
        }
        if !u0.is_finite() || !u1.is_finite() || f.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite problem data".into()));
        }
        let positive = f[0] > 0.0;
        if f.iter().any(|&v| v == 0.0 || (v > 0.0) != positive) {
            return Err(Error::Domain(
                "f must have constant sign and |f| > 0 on [0, 1]".into(),
            ));
        }
        Ok(Self { f, u0, u1 })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64, u0: f64, u1: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Dimension(format!("need at least 3 nodes, got {n}")));
        }
        let h = 1.0 / (n - 1) as f64;
        Self::new((0..n).map(|k| f(k as f64 * h)).collect(), u0, u1)
    }

    pub fn n(&self) -> usize {
        self.f.len()
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn u1(&self) -> f64 {
        self.u1
    }

    /// `(-f, -u0, -u1)`; its solution is the negated solution.
    pub fn mirrored(&self) -> Self {
        Self {
            f: self.f.iter().map(|v| -v).collect(),
            u0: -self.u0,
            u1: -self.u1,
        }
    }
}

/// Location of the zero of `u'`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegeneratePoint {
    pub t: f64,
    /// `false` when the zero sits on an endpoint of `[0, 1]`.
    pub interior: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    Convex,
    Concave,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OneDSolution {
    nodes: Vec<f64>,
    u: Vec<f64>,
    u_prime: Vec<f64>,
    c: f64,
    t0: Option<DegeneratePoint>,
    cumulative: Vec<f64>,
    f: Vec<f64>,
    bisection_iters: usize,
    bracket_width: f64,
}

impl OneDSolution {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn u_prime(&self) -> &[f64] {
        &self.u_prime
    }

    /// Shooting constant.
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn t0(&self) -> Option<DegeneratePoint> {
        self.t0
    }

    /// Samples of `F = ∫ -3f`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.nodes.len() - 1) as f64
    }

    pub fn bisection_iters(&self) -> usize {
        self.bisection_iters
    }

    /// Width of the bracket bisection started from.
    pub fn bracket_width(&self) -> f64 {
        self.bracket_width
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let n = self.nodes.len();
        let s = (t.clamp(0.0, 1.0) * (n - 1) as f64).min((n - 1) as f64);
        let k = (s.floor() as usize).min(n - 2);
        (k, s - k as f64)
    }

    /// Piecewise-linear interpolant of the nodal `u`.
    pub fn eval(&self, t: f64) -> f64 {
        let (k, w) = self.locate(t);
        self.u[k] * (1.0 - w) + self.u[k + 1] * w
    }

    /// `cbrt(F(t) - c)` with `F` interpolated linearly between nodes.
    pub fn eval_prime(&self, t: f64) -> f64 {
        (self.eval_cumulative(t) - self.c).cbrt()
    }

    fn eval_cumulative(&self, t: f64) -> f64 {
        let (k, w) = self.locate(t);
        self.cumulative[k] * (1.0 - w) + self.cumulative[k + 1] * w
    }

    fn eval_f(&self, t: f64) -> f64 {
        let (k, w) = self.locate(t);
        self.f[k] * (1.0 - w) + self.f[k + 1] * w
    }

    /// Monotonicity of the nodal `u'`.
    pub fn convexity(&self) -> Convexity {
        let d: Vec<f64> = self.u_prime.windows(2).map(|w| w[1] - w[0]).collect();
        if d.iter().all(|&v| v > 0.0) {
            Convexity::Convex
        } else if d.iter().all(|&v| v < 0.0) {
            Convexity::Concave
        } else {
            Convexity::Neither
        }
    }
}

/// Exact integral of `cbrt` over a cell on which its argument moves
/// linearly from `a` to `b`, divided by the cell length.
fn mean_cbrt(a: f64, b: f64) -> f64 {
    let d = b - a;
    let m = 0.5 * (a + b);
    if d.abs() <= 1e-4 * m.abs() {
        // series in d/m; the next term is O((d/m)^4)
        let r = d / m;
        m.cbrt() * (1.0 - r * r / 108.0)
    } else {
        0.75 * (b * b.cbrt() - a * a.cbrt()) / d
    }
}

fn cumulative_source(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in f.windows(2) {
        acc += -3.0 * 0.5 * (w[0] + w[1]) * h;
        out.push(acc);
    }
    out
}

fn integrate_u(cumulative: &[f64], c: f64, h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(cumulative.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in cumulative.windows(2) {
        acc += h * mean_cbrt(w[0] - c, w[1] - c);
        out.push(acc);
    }
    out
}

fn total_rise(cumulative: &[f64], c: f64, h: f64) -> f64 {
    let cells: Vec<f64> = cumulative
        .windows(2)
        .map(|w| h * mean_cbrt(w[0] - c, w[1] - c))
        .collect();
    pairwise_sum(&cells)
}

/// Solves for the shooting constant and assembles the solution.
///
/// Stops when `|G(c)| <= tol (1 + |u1|)` or the bracket is narrower than
/// `tol`.
pub fn solve_1d(problem: &OneDProblem, tol: f64) -> Result<OneDSolution> {
    if !(tol > 0.0) {
        return Err(Error::Parameter(format!("tol must be > 0, got {tol}")));
    }
    let n = problem.n();
    let h = 1.0 / (n - 1) as f64;
    let cumulative = cumulative_source(&problem.f, h);
    let g = |c: f64| problem.u0 + total_rise(&cumulative, c, h) - problem.u1;

    let f_min = cumulative.iter().copied().fold(f64::INFINITY, f64::min);
    let f_max = cumulative.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (mut lo, mut hi) = (f_min - 1.0, f_max + 1.0);
    let mut step = 1.0;
    let mut expansions = 0;
    while g(lo) <= 0.0 {
        lo -= step;
        step *= 2.0;
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS || !lo.is_finite() {
            return Err(Error::Bracket { expansions });
        }
    }
    step = 1.0;
    while g(hi) >= 0.0 {
        hi += step;
        step *= 2.0;
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS || !hi.is_finite() {
            return Err(Error::Bracket { expansions });
        }
    }

    let bracket_width = hi - lo;
    let target = tol * (1.0 + problem.u1.abs());
    let mut iters = 0;
    let c = loop {
        let mid = 0.5 * (lo + hi);
        iters += 1;
        let gm = g(mid);
        if gm.abs() <= target || hi - lo <= tol || mid == lo || mid == hi {
            break mid;
        }
        if gm > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    };

    let u: Vec<f64> = integrate_u(&cumulative, c, h)
        .into_iter()
        .map(|v| problem.u0 + v)
        .collect();
    let u_prime: Vec<f64> = cumulative.iter().map(|&v| (v - c).cbrt()).collect();
    let nodes: Vec<f64> = (0..n).map(|k| k as f64 * h).collect();
    let t0 = locate_degenerate_point(&cumulative, c, h, tol);
    Ok(OneDSolution {
        nodes,
        u,
        u_prime,
        c,
        t0,
        cumulative,
        f: problem.f.clone(),
        bisection_iters: iters,
        bracket_width,
    })
}

/// The unique sign change of `F - c`, refined by one secant step; an
/// endpoint counts when `|F - c|` there is at the shooting tolerance.
fn locate_degenerate_point(cumulative: &[f64], c: f64, h: f64, tol: f64) -> Option<DegeneratePoint> {
    let n = cumulative.len();
    let z: Vec<f64> = cumulative.iter().map(|&v| v - c).collect();
    for k in 0..n - 1 {
        if z[k] == 0.0 {
            return Some(DegeneratePoint {
                t: k as f64 * h,
                interior: k > 0,
            });
        }
        if z[k] * z[k + 1] < 0.0 {
            let t = k as f64 * h + h * z[k] / (z[k] - z[k + 1]);
            return Some(DegeneratePoint { t, interior: true });
        }
    }
    let scale = 10.0 * tol * (1.0 + cumulative.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
    if z[0].abs() <= scale {
        Some(DegeneratePoint {
            t: 0.0,
            interior: false,
        })
    } else if z[n - 1].abs() <= scale {
        Some(DegeneratePoint {
            t: 1.0,
            interior: false,
        })
    } else {
        None
    }
}

/// Relative residuals of `-(u')² u'' = f` over nodes with `|u'| > mask`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual1D {
    /// `u'' = -f (F - c)^(-2/3)`: vanishes up to rounding.
    pub analytic_max_rel: f64,
    /// `u''` from central differences of the nodal `u'`.
    pub fd_max_rel: f64,
    pub checked: usize,
    pub excluded: usize,
    pub mask: f64,
}

pub fn residual_1d(sol: &OneDSolution, mask: f64) -> Residual1D {
    let n = sol.nodes.len();
    let h = sol.h();
    let (mut an, mut fd) = (0.0_f64, 0.0_f64);
    let (mut checked, mut excluded) = (0, 0);
    for k in 1..n - 1 {
        let up = sol.u_prime[k];
        if up.abs() <= mask {
            excluded += 1;
            continue;
        }
        checked += 1;
        let f = sol.f[k];
        let z = sol.cumulative[k] - sol.c;
        let upp_exact = -f / (z * z).cbrt();
        an = an.max((-(up * up) * upp_exact - f).abs() / f.abs());
        let upp_fd = (sol.u_prime[k + 1] - sol.u_prime[k - 1]) / (2.0 * h);
        fd = fd.max((-(up * up) * upp_fd - f).abs() / f.abs());
    }
    Residual1D {
        analytic_max_rel: an,
        fd_max_rel: fd,
        checked,
        excluded,
        mask,
    }
}

/// Measured `lim u'(s) / (s - t0)^(1/3)` against `cbrt(-3 f(t0))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegenerateLimit {
    pub t0: f64,
    pub expected: f64,
    pub measured: f64,
    /// `|measured - expected| / |expected|`.
    pub deviation: f64,
    /// Raw ratios at `t0 + δ` and `t0 - δ` for each offset `δ`.
    pub offsets: Vec<f64>,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

/// Evaluates the ratio at `t0 ± {2h, 4h, 8h}` and extrapolates to `δ = 0`
/// on each side; the measured limit is the mean of the two sides.
pub fn degenerate_limit_check(sol: &OneDSolution) -> Result<DegenerateLimit> {
    let t0 = match sol.t0 {
        Some(p) if p.interior => p.t,
        _ => {
            return Err(Error::NotApplicable(
                "no interior degenerate point".into(),
            ))
        }
    };
    let h = sol.h();
    let offsets = vec![8.0 * h, 4.0 * h, 2.0 * h];
    if t0 - offsets[0] < 0.0 || t0 + offsets[0] > 1.0 {
        return Err(Error::NotApplicable(format!(
            "degenerate point {t0} too close to the boundary"
        )));
    }
    let ratio = |s: f64| sol.eval_prime(s) / (s - t0).cbrt();
    let right: Vec<f64> = offsets.iter().map(|&d| ratio(t0 + d)).collect();
    let left: Vec<f64> = offsets.iter().map(|&d| ratio(t0 - d)).collect();
    let measured = 0.5 * (extrapolate_to_zero(&offsets, &right) + extrapolate_to_zero(&offsets, &left));
    let expected = (-3.0 * sol.eval_f(t0)).cbrt();
    Ok(DegenerateLimit {
        t0,
        expected,
        measured,
        deviation: (measured - expected).abs() / expected.abs(),
        offsets,
        right,
        left,
    })
}

/// Discrete `W^{1,p}` seminorm of `|u'|^α` on `[0,1]` minus shrinking
/// neighborhoods `|t - t0| <= δ` of the degenerate point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegularityProfile {
    pub alpha: f64,
    pub p: f64,
    pub cutoffs: Vec<f64>,
    /// `Σ |(|u'|^α)'|^p h` per cutoff, or the maximum for `p = ∞`.
    pub integrals: Vec<f64>,
    pub fit: RateFit,
}

/// Cutoffs run over `δ = 2h, 4h, ...` up to `1/8`; the profile is fitted
/// against `δ` with the three-model selection of [`crate::rates`].
pub fn oned_regularity_profile(sol: &OneDSolution, alpha: f64, p: f64) -> Result<RegularityProfile> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    if !(p >= 1.0) {
        return Err(Error::Parameter(format!("p must be >= 1, got {p}")));
    }
    let t0 = sol
        .t0
        .ok_or_else(|| Error::NotApplicable("solution has no degenerate point".into()))?
        .t;
    let n = sol.nodes.len();
    let h = sol.h();
    let m: Vec<f64> = sol.u_prime.iter().map(|v| v.abs().powf(alpha)).collect();
    let dm: Vec<(f64, f64)> = (1..n - 1)
        .map(|k| (sol.nodes[k], (m[k + 1] - m[k - 1]) / (2.0 * h)))
        .collect();
    let mut cutoffs = Vec::new();
    let mut d = 2.0 * h;
    while d <= 0.125 + 1e-12 {
        cutoffs.push(d);
        d *= 2.0;
    }
    if cutoffs.len() < 4 {
        return Err(Error::Resolution(format!(
            "need n >= 129 for a regularity profile, got {n}"
        )));
    }
    let integrals: Vec<f64> = cutoffs
        .iter()
        .map(|&cut| {
            let kept = dm.iter().filter(|(t, _)| (t - t0).abs() > cut).map(|(_, v)| v.abs());
            if p.is_infinite() {
                kept.fold(0.0, f64::max)
            } else {
                let terms: Vec<f64> = kept.map(|v| v.powf(p) * h).collect();
                pairwise_sum(&terms)
            }
        })
        .collect();
    // the fit wants decreasing "mesh" parameters
    let (hs, vals): (Vec<f64>, Vec<f64>) = cutoffs.iter().rev().zip(integrals.iter().rev()).map(|(a, b)| (*a, *b)).unzip();
    let fit = classify(&hs, &vals)?;
    Ok(RegularityProfile {
        alpha,
        p,
        cutoffs,
        integrals,
        fit,
    })
}

/// Writes `t,u,u_prime` rows after `# c = ...` and `# t0 = ...` header lines.
pub fn write_solution_csv<W: std::io::Write>(sol: &OneDSolution, mut out: W) -> Result<()> {
    writeln!(out, "# c = {:?}", sol.c)?;
    match sol.t0 {
        Some(p) => writeln!(out, "# t0 = {:?} interior = {}", p.t, p.interior)?,
        None => writeln!(out, "# t0 = none")?,
    }
    writeln!(out, "t,u,u_prime")?;
    for k in 0..sol.nodes.len() {
        writeln!(out, "{:?},{:?},{:?}", sol.nodes[k], sol.u[k], sol.u_prime[k])?;
    }
    Ok(())
}
