//! Three-way classification of mesh-refinement sequences.
//!
//! A sequence `N(h)` (typically `‖·‖^p` of a discrete norm) is fitted
//! against four models in `L = ln(1/h)`:
//!
//! | model       | form              | verdict              |
//! |-------------|-------------------|----------------------|
//! | constant    | `a`               | convergent           |
//! | convergent  | `a + b h^s`       | convergent           |
//! | logarithmic | `a + b L`         | log-divergent        |
//! | power       | `a + b h^(-r)`    | power-divergent (`r`)|
//!
//! Rates are confined to `[0.05, 4]`; slower power laws are not
//! distinguishable from a logarithm at desk-scale refinement. Selection is
//! by nested F-tests at the 1% level: the logarithmic model must beat the
//! constant, and a rate model must beat the best simpler model. Critical
//! logarithmic cases therefore come out as logarithmic instead of as a
//! power law with a tiny exponent.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use crate::error::{Error, Result};

pub const MIN_RATE: f64 = 0.05;
pub const MAX_RATE: f64 = 4.0;
pub const SIGNIFICANCE: f64 = 0.01;
pub const MIN_POINTS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Convergent,
    LogDivergent,
    PowerDivergent { rate: f64 },
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Convergent => "convergent",
            Verdict::LogDivergent => "log-divergent",
            Verdict::PowerDivergent { .. } => "power-divergent",
        }
    }

    /// Same class, ignoring the rate.
    pub fn same_class(&self, other: &Verdict) -> bool {
        self.label() == other.label()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Constant,
    Convergent,
    Logarithmic,
    Power,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub verdict: Verdict,
    pub model: Model,
    /// Parameters `a`, `b` of the selected model.
    pub intercept: f64,
    pub coefficient: f64,
    /// Exponent of `1/h`: `r > 0` for power divergence, `-s` for the
    /// convergent model, `0` otherwise.
    pub rate: f64,
    /// 95% interval for `rate` (degenerate for constant/log models).
    pub rate_ci: (f64, f64),
    /// Least-squares slope of `N` against `ln(1/h)`, always reported.
    pub log_slope: f64,
    pub log_slope_ci: (f64, f64),
    /// Residual sums of squares: constant, convergent, log, power.
    pub rss: [f64; 4],
}

impl RateFit {
    /// Value of the selected model at mesh size `h`.
    pub fn evaluate(&self, h: f64) -> f64 {
        match self.model {
            Model::Constant => self.intercept,
            Model::Logarithmic => self.intercept + self.coefficient * (1.0 / h).ln(),
            Model::Convergent | Model::Power => self.intercept + self.coefficient * h.powf(-self.rate),
        }
    }
}

struct Line {
    a: f64,
    b: f64,
    rss: f64,
    sxx: f64,
}

fn fit_line(x: &[f64], y: &[f64]) -> Line {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let a = my - b * mx;
    let rss = x.iter().zip(y).map(|(u, v)| (v - a - b * u).powi(2)).sum();
    Line { a, b, rss, sxx }
}

/// Best exponent `k` in `[MIN_RATE, MAX_RATE]` for `y ≈ a + b exp(sign k ℓ)`.
fn fit_exponential(ell: &[f64], y: &[f64], sign: f64, require_positive_b: bool) -> Option<(f64, Line)> {
    let eval = |k: f64| {
        let x: Vec<f64> = ell.iter().map(|l| (sign * k * l).exp()).collect();
        let line = fit_line(&x, y);
        let ok = !require_positive_b || line.b > 0.0;
        (if ok { line.rss } else { f64::INFINITY }, line)
    };
    let grid = 240;
    let (lo, hi) = (MIN_RATE.ln(), MAX_RATE.ln());
    let mut best: Option<(f64, f64)> = None;
    for s in 0..=grid {
        let k = (lo + (hi - lo) * s as f64 / grid as f64).exp();
        let (rss, _) = eval(k);
        if rss.is_finite() && best.map_or(true, |(_, r)| rss < r) {
            best = Some((k, rss));
        }
    }
    let (k0, _) = best?;
    // golden-section refinement on one grid cell either side
    let step = ((hi - lo) / grid as f64).exp();
    let (mut a, mut b) = ((k0 / step).max(MIN_RATE), (k0 * step).min(MAX_RATE));
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (eval(c).0, eval(d).0);
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval(c).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval(d).0;
        }
    }
    let k = 0.5 * (a + b);
    let (rss, line) = eval(k);
    let (rss0, line0) = eval(k0);
    if rss <= rss0 {
        rss.is_finite().then_some((k, line))
    } else {
        rss0.is_finite().then_some((k0, line0))
    }
}

fn f_critical(d1: f64, d2: f64) -> f64 {
    FisherSnedecor::new(d1, d2)
        .map(|d| d.inverse_cdf(1.0 - SIGNIFICANCE))
        .unwrap_or(f64::INFINITY)
}

fn t_quantile(dof: f64) -> f64 {
    StudentsT::new(0.0, 1.0, dof)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(f64::INFINITY)
}

/// Standard error of the exponent from the linearized 3-parameter model.
fn exponent_stderr(ell: &[f64], sign: f64, k: f64, b: f64, rss: f64) -> f64 {
    let n = ell.len();
    let rows: Vec<[f64; 3]> = ell
        .iter()
        .map(|&l| {
            let e = (sign * k * l).exp();
            [1.0, e, sign * b * l * e]
        })
        .collect();
    let mut m = [[0.0; 3]; 3];
    for r in &rows {
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += r[i] * r[j];
            }
        }
    }
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < f64::MIN_POSITIVE {
        return f64::INFINITY;
    }
    let inv22 = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
    let sigma2 = rss / (n - 3) as f64;
    (sigma2 * inv22).abs().sqrt()
}

/// Classifies `values[k]` measured at mesh sizes `hs[k]` (strictly
/// decreasing, positive).
pub fn classify(hs: &[f64], values: &[f64]) -> Result<RateFit> {
    let n = hs.len();
    if n != values.len() {
        return Err(Error::Fit("mesh and value counts differ".into()));
    }
    if n < MIN_POINTS {
        return Err(Error::Fit(format!(
            "need at least {MIN_POINTS} meshes, got {n}"
        )));
    }
    if hs.iter().any(|h| !(*h > 0.0)) || hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Fit("mesh sizes must be positive and strictly decreasing".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Fit("non-finite value in sequence".into()));
    }
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let floor = n as f64 * (1e-13 * scale).powi(2);
    let ell: Vec<f64> = hs.iter().map(|h| (hs[0] / h).ln()).collect();
    let big_l: Vec<f64> = hs.iter().map(|h| -(h.ln())).collect();

    let mean = values.iter().sum::<f64>() / n as f64;
    let rss_const = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() + floor;
    let log = fit_line(&big_l, values);
    let rss_log = log.rss + floor;
    let conv = fit_exponential(&ell, values, -1.0, false);
    let power = fit_exponential(&ell, values, 1.0, true);
    let rss_conv = conv.as_ref().map_or(f64::INFINITY, |(_, l)| l.rss + floor);
    let rss_power = power.as_ref().map_or(f64::INFINITY, |(_, l)| l.rss + floor);

    let nf = n as f64;
    let log_accepted = log.b > 0.0
        && (rss_const - rss_log) / (rss_log / (nf - 2.0)) > f_critical(1.0, nf - 2.0);
    let (base_rss, base_k) = if log_accepted { (rss_log, 2.0) } else { (rss_const, 1.0) };
    let (rate_rss, rate_is_power) = if rss_power < rss_conv {
        (rss_power, true)
    } else {
        (rss_conv, false)
    };
    let rate_accepted = n > 3
        && rate_rss.is_finite()
        && (base_rss - rate_rss) / (3.0 - base_k) / (rate_rss / (nf - 3.0))
            > f_critical(3.0 - base_k, nf - 3.0);

    let t2 = t_quantile(nf - 2.0);
    let se_slope = if log.sxx > 0.0 {
        (rss_log / (nf - 2.0) / log.sxx).sqrt()
    } else {
        f64::INFINITY
    };
    let log_slope_ci = (log.b - t2 * se_slope, log.b + t2 * se_slope);
    let rss = [rss_const, rss_conv, rss_log, rss_power];

    let fit = if rate_accepted {
        let (k, line) = if rate_is_power {
            power.as_ref().unwrap()
        } else {
            conv.as_ref().unwrap()
        };
        let sign = if rate_is_power { 1.0 } else { -1.0 };
        let se = exponent_stderr(&ell, sign, *k, line.b, rate_rss);
        let t3 = t_quantile(nf - 3.0);
        let rate = sign * k;
        // coefficient of h^(∓k) in absolute units
        let coefficient = line.b * hs[0].powf(sign * *k);
        RateFit {
            verdict: if rate_is_power {
                Verdict::PowerDivergent { rate: *k }
            } else {
                Verdict::Convergent
            },
            model: if rate_is_power { Model::Power } else { Model::Convergent },
            intercept: line.a,
            coefficient,
            rate,
            rate_ci: (rate - t3 * se, rate + t3 * se),
            log_slope: log.b,
            log_slope_ci,
            rss,
        }
    } else if log_accepted {
        RateFit {
            verdict: Verdict::LogDivergent,
            model: Model::Logarithmic,
            intercept: log.a,
            coefficient: log.b,
            rate: 0.0,
            rate_ci: (0.0, 0.0),
            log_slope: log.b,
            log_slope_ci,
            rss,
        }
    } else {
        RateFit {
            verdict: Verdict::Convergent,
            model: Model::Constant,
            intercept: mean,
            coefficient: 0.0,
            rate: 0.0,
            rate_ci: (0.0, 0.0),
            log_slope: log.b,
            log_slope_ci,
            rss,
        }
    };
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn meshes() -> Vec<f64> {
        (5..=10).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn exact_models_are_recovered() {
        let hs = meshes();
        let c: Vec<f64> = hs.iter().map(|_| 2.5).collect();
        assert_eq!(classify(&hs, &c).unwrap().verdict, Verdict::Convergent);
        let l: Vec<f64> = hs.iter().map(|h| 1.0 + 0.7 * (1.0 / h).ln()).collect();
        let fit = classify(&hs, &l).unwrap();
        assert_eq!(fit.verdict, Verdict::LogDivergent);
        assert!((fit.log_slope - 0.7).abs() < 1e-9);
        let p: Vec<f64> = hs.iter().map(|h| 0.3 + 2.0 * h.powf(-0.25)).collect();
        let fit = classify(&hs, &p).unwrap();
        match fit.verdict {
            Verdict::PowerDivergent { rate } => assert!((rate - 0.25).abs() < 1e-4, "{fit:?}"),
            v => panic!("{v:?}"),
        }
        assert!((fit.coefficient - 2.0).abs() < 1e-3, "{fit:?}");
        for &h in &hs {
            assert!((fit.evaluate(h) - 0.3 - 2.0 * h.powf(-0.25)).abs() < 1e-3);
        }
        let s: Vec<f64> = hs.iter().map(|h| 4.0 - 1.5 * h.powf(0.167)).collect();
        let fit = classify(&hs, &s).unwrap();
        assert_eq!(fit.verdict, Verdict::Convergent, "{fit:?}");
        assert!((fit.rate + 0.167).abs() < 1e-4);
    }

    #[test]
    fn needs_four_decreasing_meshes() {
        assert!(classify(&[0.1, 0.05, 0.025], &[1.0, 1.0, 1.0]).is_err());
        assert!(classify(&[0.1, 0.2, 0.05, 0.01], &[1.0; 4]).is_err());
        assert!(classify(&[0.1, 0.05, 0.02, 0.01], &[1.0, f64::NAN, 1.0, 1.0]).is_err());
    }

    #[test]
    fn noisy_sequences_recover_generating_model() {
        // 1% multiplicative noise, 200 trials per model
        let hs = meshes();
        let mut rng = ChaCha8Rng::seed_from_u64(1234);
        let models: [(&str, Box<dyn Fn(f64) -> f64>); 3] = [
            ("const", Box::new(|_h| 1.0)),
            ("log", Box::new(|h: f64| 1.0 + 0.5 * (1.0 / h).ln())),
            ("power", Box::new(|h: f64| 1.0 + 0.2 * h.powf(-0.5))),
        ];
        for (name, m) in models.iter() {
            let trials = 200;
            let mut hits = 0;
            for _ in 0..trials {
                let v: Vec<f64> = hs
                    .iter()
                    .map(|&h| m(h) * (1.0 + 0.01 * (2.0 * rng.gen::<f64>() - 1.0) * 3f64.sqrt()))
                    .collect();
                let verdict = classify(&hs, &v).unwrap().verdict;
                let ok = match *name {
                    "const" => verdict == Verdict::Convergent,
                    "log" => verdict == Verdict::LogDivergent,
                    _ => matches!(verdict, Verdict::PowerDivergent { .. }),
                };
                hits += ok as usize;
            }
            let rate = hits as f64 / trials as f64;
            assert!(rate >= 0.95, "{name}: recovered {rate}");
        }
    }
}
