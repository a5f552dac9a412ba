//! Discrete Sobolev and BV quantities of `|Du|^α`, evaluated over a mesh
//! family and classified by [`rates::classify`](crate::rates::classify).
//!
//! All integrals are nodal sums times the cell area over the nodes strictly
//! inside the region, minus excluded nodes. Derivatives are central
//! differences applied twice (once to `u`, once to `(|Du|² + κ)^{α/2}`).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gradient, Grid2D, Region, ScalarField2D};
use crate::numerics::pairwise_sum;
use crate::rates::{classify, RateFit, Verdict};

/// Nodes dropped from a quadrature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Exclusion {
    #[default]
    None,
    /// Nodes with `|x₁ - x| < h` (one cell around a known ridge).
    Ridge { x: f64 },
    /// Nodes where the central `|Du|` is below the threshold.
    GradientBelow { threshold: f64 },
}

impl Exclusion {
    fn keeps(&self, grid: &Grid2D, k: usize, grad_norm: f64) -> bool {
        match *self {
            Exclusion::None => true,
            Exclusion::Ridge { x } => (grid.x(k % grid.nx()) - x).abs() >= grid.hx() * (1.0 - 1e-9),
            Exclusion::GradientBelow { threshold } => grad_norm >= threshold,
        }
    }
}

/// Exponent of the singular factor of `D|Dw|^α` in `L^p` for the sharp
/// profile, `(3 - α) p / 3`, and the resulting verdict.
pub fn predicted_verdict(alpha: f64, p: f64) -> Verdict {
    threshold_verdict((3.0 - alpha) * p / 3.0)
}

/// Verdict for `∫ |Dw|^s`, whose singular exponent is `-s / 3`.
pub fn predicted_negative_power_verdict(s: f64) -> Verdict {
    threshold_verdict(-s / 3.0)
}

fn threshold_verdict(beta: f64) -> Verdict {
    const TOL: f64 = 1e-12;
    if beta < 1.0 - TOL {
        Verdict::Convergent
    } else if beta <= 1.0 + TOL {
        Verdict::LogDivergent
    } else {
        Verdict::PowerDivergent { rate: beta - 1.0 }
    }
}

fn kept_nodes(field: &ScalarField2D, region: &Region, exclusion: &Exclusion, grad_norm: &[f64]) -> Result<Vec<usize>> {
    let grid = field.grid();
    let idx = region.node_indices(grid)?;
    Ok(idx
        .into_iter()
        .filter(|&k| exclusion.keeps(grid, k, grad_norm[k]))
        .collect())
}

fn grad_norm(u: &ScalarField2D) -> Vec<f64> {
    let g = gradient(u);
    g.dx().iter().zip(g.dy()).map(|(a, b)| a.hypot(*b)).collect()
}

/// `|D (|Du|² + κ)^{α/2}|` at every node.
pub fn weighted_gradient_magnitude(u: &ScalarField2D, alpha: f64, kappa: f64) -> ScalarField2D {
    let g = gradient(u);
    let m: Vec<f64> = g
        .dx()
        .iter()
        .zip(g.dy())
        .map(|(a, b)| (a * a + b * b + kappa).powf(0.5 * alpha))
        .collect();
    let m = ScalarField2D::from_raw(*u.grid(), m);
    let dm = gradient(&m);
    ScalarField2D::from_raw(
        *u.grid(),
        dm.dx().iter().zip(dm.dy()).map(|(a, b)| a.hypot(*b)).collect(),
    )
}

/// `∫ |D(|Du|²+κ)^{α/2}|^p` over the kept nodes of `region`.
pub fn weighted_sobolev_integral(
    u: &ScalarField2D,
    alpha: f64,
    p: f64,
    kappa: f64,
    region: &Region,
    exclusion: &Exclusion,
) -> Result<f64> {
    check_exponents(alpha, p, kappa)?;
    let gn = grad_norm(u);
    let keep = kept_nodes(u, region, exclusion, &gn)?;
    let d = weighted_gradient_magnitude(u, alpha, kappa);
    let terms: Vec<f64> = keep.iter().map(|&k| d.values()[k].powf(p)).collect();
    Ok(pairwise_sum(&terms) * u.grid().cell_area())
}

fn check_exponents(alpha: f64, p: f64, kappa: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Parameter(format!("p must be >= 1 and finite, got {p}")));
    }
    if !(kappa >= 0.0) {
        return Err(Error::Parameter(format!("kappa must be >= 0, got {kappa}")));
    }
    Ok(())
}

fn mesh_sequence(family: &[ScalarField2D]) -> Result<Vec<f64>> {
    if family.len() < crate::rates::MIN_POINTS {
        return Err(Error::Fit(format!(
            "need at least {} meshes, got {}",
            crate::rates::MIN_POINTS,
            family.len()
        )));
    }
    let hs: Vec<f64> = family.iter().map(|u| u.grid().h()).collect();
    if hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Fit("mesh sizes must be strictly decreasing".into()));
    }
    Ok(hs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevScanReport {
    pub alpha: f64,
    pub p: f64,
    pub kappa: f64,
    pub region: Region,
    pub exclusion: Exclusion,
    pub mesh_sequence: Vec<f64>,
    /// `‖D(|Du|²+κ)^{α/2}‖_{L^p}` per mesh.
    pub norms: Vec<f64>,
    /// The fitted quantity, `norms^p`.
    pub integrals: Vec<f64>,
    pub verdict: Verdict,
    pub fit: RateFit,
}

pub fn sobolev_scan(
    family: &[ScalarField2D],
    alpha: f64,
    p: f64,
    kappa: f64,
    region: &Region,
    exclusion: &Exclusion,
) -> Result<SobolevScanReport> {
    check_exponents(alpha, p, kappa)?;
    let hs = mesh_sequence(family)?;
    let integrals = family
        .iter()
        .map(|u| weighted_sobolev_integral(u, alpha, p, kappa, region, exclusion))
        .collect::<Result<Vec<f64>>>()?;
    let norms: Vec<f64> = integrals.iter().map(|v| v.powf(1.0 / p)).collect();
    let fit = classify(&hs, &integrals)?;
    Ok(SobolevScanReport {
        alpha,
        p,
        kappa,
        region: *region,
        exclusion: *exclusion,
        mesh_sequence: hs,
        norms,
        integrals,
        verdict: fit.verdict,
        fit,
    })
}

impl SobolevScanReport {
    /// One row `alpha,p,kappa,h,norm,integral` per mesh, with header.
    pub fn write_csv<W: Write>(&self, mut out: W, header: bool) -> Result<()> {
        if header {
            writeln!(out, "alpha,p,kappa,h,norm,integral")?;
        }
        for ((h, n), i) in self.mesh_sequence.iter().zip(&self.norms).zip(&self.integrals) {
            writeln!(out, "{:?},{:?},{:?},{:?},{:?},{:?}", self.alpha, self.p, self.kappa, h, n, i)?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    /// `ln(1/h)` against the measured integral.
    pub fn write_data_gnuplot<W: Write>(&self, out: W) -> Result<()> {
        write_columns(out, &self.mesh_sequence, &self.integrals)
    }

    /// `ln(1/h)` against the fitted model, sampled densely over the meshes.
    pub fn write_fit_gnuplot<W: Write>(&self, out: W) -> Result<()> {
        write_fit_curve(out, &self.fit, &self.mesh_sequence)
    }
}

fn write_columns<W: Write>(mut out: W, hs: &[f64], values: &[f64]) -> Result<()> {
    for (h, v) in hs.iter().zip(values) {
        writeln!(out, "{:?} {:?}", (1.0 / h).ln(), v)?;
    }
    Ok(())
}

fn write_fit_curve<W: Write>(mut out: W, fit: &RateFit, hs: &[f64]) -> Result<()> {
    let (l0, l1) = ((1.0 / hs[0]).ln(), (1.0 / hs[hs.len() - 1]).ln());
    let samples = 64;
    for k in 0..=samples {
        let l = l0 + (l1 - l0) * k as f64 / samples as f64;
        writeln!(out, "{:?} {:?}", l, fit.evaluate((-l).exp()))?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativePowerReport {
    pub s: f64,
    pub region: Region,
    pub exclusion: Exclusion,
    pub mesh_sequence: Vec<f64>,
    pub integrals: Vec<f64>,
    pub verdict: Verdict,
    pub fit: RateFit,
}

impl NegativePowerReport {
    pub fn write_csv<W: Write>(&self, mut out: W, header: bool) -> Result<()> {
        if header {
            writeln!(out, "s,h,integral")?;
        }
        for (h, i) in self.mesh_sequence.iter().zip(&self.integrals) {
            writeln!(out, "{:?},{:?},{:?}", self.s, h, i)?;
        }
        Ok(())
    }

    pub fn summary_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn write_data_gnuplot<W: Write>(&self, out: W) -> Result<()> {
        write_columns(out, &self.mesh_sequence, &self.integrals)
    }

    pub fn write_fit_gnuplot<W: Write>(&self, out: W) -> Result<()> {
        write_fit_curve(out, &self.fit, &self.mesh_sequence)
    }
}

/// `∫ |Du|^s` over the kept nodes of `region`. A kept node with `Du = 0`
/// and `s < 0` is a domain error.
pub fn negative_power_integral(u: &ScalarField2D, s: f64, region: &Region, exclusion: &Exclusion) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::Parameter(format!("s must be finite, got {s}")));
    }
    let gn = grad_norm(u);
    let keep = kept_nodes(u, region, exclusion, &gn)?;
    if s < 0.0 && keep.iter().any(|&k| gn[k] == 0.0) {
        return Err(Error::Domain(
            "vanishing gradient at a kept node; widen the exclusion".into(),
        ));
    }
    let terms: Vec<f64> = keep.iter().map(|&k| gn[k].powf(s)).collect();
    Ok(pairwise_sum(&terms) * u.grid().cell_area())
}

pub fn negative_power_scan(
    family: &[ScalarField2D],
    s: f64,
    region: &Region,
    exclusion: &Exclusion,
) -> Result<NegativePowerReport> {
    let hs = mesh_sequence(family)?;
    let integrals = family
        .iter()
        .map(|u| negative_power_integral(u, s, region, exclusion))
        .collect::<Result<Vec<f64>>>()?;
    let fit = classify(&hs, &integrals)?;
    Ok(NegativePowerReport {
        s,
        region: *region,
        exclusion: *exclusion,
        mesh_sequence: hs,
        integrals,
        verdict: fit.verdict,
        fit,
    })
}

/// Anisotropic discrete total variation over the edges joining nodes of the
/// closed region. Edges on the region's outer rows/columns carry half the
/// transverse weight, so grid-aligned rectangles are integrated by the
/// trapezoid rule.
pub fn bv_norm(f: &ScalarField2D, region: &Region) -> Result<f64> {
    let grid = f.grid();
    let idx = region.closed_node_indices(grid)?;
    let mut inside = vec![false; grid.len()];
    for &k in &idx {
        inside[k] = true;
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let v = f.values();
    let both = |a: usize, b: usize| inside[a] && inside[b];
    let mut terms = Vec::with_capacity(2 * idx.len());
    for &k in &idx {
        let (i, j) = (k % nx, k / nx);
        if i + 1 < nx && inside[k + 1] {
            let mut t = 0.0;
            if j + 1 < ny && both(k + nx, k + nx + 1) {
                t += 0.5;
            }
            if j > 0 && both(k - nx, k - nx + 1) {
                t += 0.5;
            }
            terms.push((v[k + 1] - v[k]).abs() * grid.hy() * t);
        }
        if j + 1 < ny && inside[k + nx] {
            let mut t = 0.0;
            if i + 1 < nx && both(k + 1, k + nx + 1) {
                t += 0.5;
            }
            if i > 0 && both(k - 1, k + nx - 1) {
                t += 0.5;
            }
            terms.push((v[k + nx] - v[k]).abs() * grid.hx() * t);
        }
    }
    Ok(pairwise_sum(&terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub alpha: f64,
    pub ball: Region,
    pub double_ball: Region,
    /// `∫_B |D|Du|^α|²`.
    pub lhs: f64,
    /// `R⁻² ∫_{2B} |Du|^{2α}`.
    pub gradient_term: f64,
    /// `‖f‖_{BV(2B)} [ osc/(2R) + (R sup|f|)^{1/3} ]^{2α-3}`.
    pub bv_term: f64,
    pub f_bv: f64,
    /// `inf_c sup_{2B} |u - c|`, half the oscillation.
    pub u_sup: f64,
    pub f_sup: f64,
    pub ratio: f64,
}

pub fn energy_inequality_report(
    u: &ScalarField2D,
    f: &ScalarField2D,
    alpha: f64,
    ball: &Region,
) -> Result<EnergyReport> {
    u.grid().check_same(f.grid(), "right-hand side")?;
    if !(alpha > 1.5) {
        return Err(Error::Parameter(format!("energy inequality needs alpha > 3/2, got {alpha}")));
    }
    let radius = match ball {
        Region::Ball { radius, .. } => *radius,
        _ => return Err(Error::Parameter("energy inequality needs a ball".into())),
    };
    let grid = u.grid();
    let big = ball.scaled(2.0);
    big.check_inside(grid)?;
    let area = grid.cell_area();

    let lhs = weighted_sobolev_integral(u, alpha, 2.0, 0.0, ball, &Exclusion::None)?;
    let gn = grad_norm(u);
    let outer = big.node_indices(grid)?;
    let terms: Vec<f64> = outer.iter().map(|&k| gn[k].powf(2.0 * alpha)).collect();
    let gradient_term = pairwise_sum(&terms) * area / (radius * radius);

    let closed = big.closed_node_indices(grid)?;
    let (lo, hi) = closed.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &k| {
        let v = u.values()[k];
        (lo.min(v), hi.max(v))
    });
    let u_sup = 0.5 * (hi - lo);
    let f_sup = closed.iter().fold(0.0f64, |a, &k| a.max(f.values()[k].abs()));
    let f_bv = bv_norm(f, &big)?;
    let bracket = u_sup / radius + (radius * f_sup).cbrt();
    let bv_term = f_bv * bracket.powf(2.0 * alpha - 3.0);
    let rhs = gradient_term + bv_term;
    let ratio = if rhs > 0.0 { lhs / rhs } else { f64::INFINITY };
    Ok(EnergyReport {
        alpha,
        ball: *ball,
        double_ball: big,
        lhs,
        gradient_term,
        bv_term,
        f_bv,
        u_sup,
        f_sup,
        ratio,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GehringRow {
    pub q: f64,
    pub scan: SobolevScanReport,
    /// Closed-form verdict when the family samples the sharp profile.
    pub predicted: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GehringReport {
    pub alpha: f64,
    pub rows: Vec<GehringRow>,
}

/// Integrability of `|D|Du|^α|^q` for each `q` in `q_list ⊂ [2, 3]`.
/// Set `sharp_profile` when the family samples `w`, to attach the
/// closed-form prediction.
pub fn gehring_probe(
    family: &[ScalarField2D],
    alpha: f64,
    region: &Region,
    exclusion: &Exclusion,
    q_list: &[f64],
    sharp_profile: bool,
) -> Result<GehringReport> {
    if !(alpha > 1.5) {
        return Err(Error::Parameter(format!("probe needs alpha > 3/2, got {alpha}")));
    }
    if q_list.is_empty() || q_list.iter().any(|&q| !(2.0..=3.0).contains(&q)) {
        return Err(Error::Parameter("q values must lie in [2, 3]".into()));
    }
    let rows = q_list
        .iter()
        .map(|&q| {
            Ok(GehringRow {
                q,
                scan: sobolev_scan(family, alpha, q, 0.0, region, exclusion)?,
                predicted: sharp_profile.then(|| predicted_verdict(alpha, q)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GehringReport { alpha, rows })
}

impl GehringReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "alpha,q,h,integral,verdict,predicted")?;
        for row in &self.rows {
            let predicted = row.predicted.map_or("-", |v| v.label());
            for (h, i) in row.scan.mesh_sequence.iter().zip(&row.scan.integrals) {
                writeln!(
                    out,
                    "{:?},{:?},{:?},{:?},{},{}",
                    self.alpha,
                    row.q,
                    h,
                    i,
                    row.scan.verdict.label(),
                    predicted
                )?;
            }
        }
        Ok(())
    }
}

/// Samples `u` on the square `[-half, half]²` at each spacing.
pub fn sample_family(
    u: impl Fn(f64, f64) -> f64,
    half: f64,
    spacings: &[f64],
) -> Result<Vec<ScalarField2D>> {
    spacings
        .iter()
        .map(|&h| ScalarField2D::from_fn(Grid2D::square_with_spacing(-half, half, h)?, &u))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::sharp_w;

    fn spacings(k0: i32, k1: i32) -> Vec<f64> {
        (k0..=k1).map(|k| 2f64.powi(-k)).collect()
    }

    #[test]
    fn predicted_table() {
        assert_eq!(predicted_verdict(1.5, 2.0), Verdict::LogDivergent);
        assert_eq!(predicted_verdict(1.0, 1.5), Verdict::LogDivergent);
        assert_eq!(predicted_verdict(2.25, 2.0), Verdict::Convergent);
        assert!(matches!(predicted_verdict(0.5, 2.0), Verdict::PowerDivergent { .. }));
        assert_eq!(predicted_negative_power_verdict(-3.0), Verdict::LogDivergent);
        assert_eq!(predicted_negative_power_verdict(-2.5), Verdict::Convergent);
    }

    #[test]
    fn scan_needs_four_meshes() {
        let fam = sample_family(sharp_w, 0.75, &spacings(4, 6)).unwrap();
        let r = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
        assert!(matches!(
            sobolev_scan(&fam, 2.0, 2.0, 0.0, &r, &Exclusion::None),
            Err(Error::Fit(_))
        ));
    }

    #[test]
    fn convergent_scan_approaches_analytic_integral() {
        // |D|Dw|^2.25|² = c² |x|^{-1/2}, c = (4/3)^2.25 · 0.75; over |x| < 1/2,
        // |y| < 1/2 the integral is 4 c² (1/2)^{1/2}
        let fam = sample_family(sharp_w, 0.75, &spacings(5, 10)).unwrap();
        let r = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
        let rep = sobolev_scan(&fam, 2.25, 2.0, 0.0, &r, &Exclusion::Ridge { x: 0.0 }).unwrap();
        assert_eq!(rep.verdict, Verdict::Convergent, "{rep:?}");
        let c = (4.0f64 / 3.0).powf(2.25) * 0.75;
        let exact = 4.0 * c * c * 0.5f64.sqrt();
        let last = *rep.integrals.last().unwrap();
        assert!((last - exact).abs() < 0.05 * exact, "{last} vs {exact}");
        assert!((rep.fit.intercept - exact).abs() < 0.02 * exact, "{rep:?}");
    }

    #[test]
    fn critical_scan_is_logarithmic_with_analytic_slope() {
        let fam = sample_family(sharp_w, 0.75, &spacings(5, 10)).unwrap();
        let r = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
        let rep = sobolev_scan(&fam, 1.5, 2.0, 0.0, &r, &Exclusion::Ridge { x: 0.0 }).unwrap();
        assert_eq!(rep.verdict, Verdict::LogDivergent, "{rep:?}");
        let slope = 32.0 / 27.0;
        assert!((rep.fit.log_slope - slope).abs() < 0.1 * slope, "{rep:?}");
        let mut buf = Vec::new();
        rep.write_csv(&mut buf, true).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 7);
        assert!(rep.summary_json().unwrap().contains("log_divergent"));
    }

    #[test]
    fn regularization_removes_divergence() {
        let fam = sample_family(sharp_w, 0.75, &spacings(5, 9)).unwrap();
        let r = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
        let rep = sobolev_scan(&fam, 1.5, 2.0, 0.1, &r, &Exclusion::None).unwrap();
        assert_eq!(rep.verdict, Verdict::Convergent, "{rep:?}");
    }

    #[test]
    fn zero_power_gives_area() {
        let fam = sample_family(sharp_w, 0.75, &spacings(4, 7)).unwrap();
        let r = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
        let rep = negative_power_scan(&fam, 0.0, &r, &Exclusion::None).unwrap();
        for (u, v) in fam.iter().zip(&rep.integrals) {
            assert_eq!(*v, r.discrete_area(u.grid()).unwrap());
        }
        assert!(matches!(
            negative_power_integral(&fam[0], -1.0, &r, &Exclusion::None),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bv_norm_examples() {
        let g = Grid2D::square(49, -0.25, 1.25).unwrap();
        let unit = Region::rectangle(0.0, 1.0, 0.0, 1.0);
        let c = ScalarField2D::constant(g, 3.0).unwrap();
        assert_eq!(bv_norm(&c, &unit).unwrap(), 0.0);
        let lin = ScalarField2D::from_fn(g, |x, _| x).unwrap();
        assert!((bv_norm(&lin, &unit).unwrap() - 1.0).abs() < 1e-12);
        // unit jump across a region of height 0.5
        let step = ScalarField2D::from_fn(g, |x, _| if x > 0.51 { 1.0 } else { 0.0 }).unwrap();
        let strip = Region::rectangle(0.0, 1.0, 0.25, 0.75);
        assert!((bv_norm(&step, &strip).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bv_norm_shift_and_scale() {
        let g = Grid2D::square(33, -1.0, 1.0).unwrap();
        let f = ScalarField2D::from_fn(g, |x, y| (3.0 * x).sin() + x * y).unwrap();
        let r = Region::ball((0.0, 0.0), 0.8);
        let base = bv_norm(&f, &r).unwrap();
        let shifted = bv_norm(&f.map(|v| v + 10.0).unwrap(), &r).unwrap();
        let scaled = bv_norm(&f.map(|v| 2.5 * v).unwrap(), &r).unwrap();
        assert!((shifted - base).abs() < 1e-12 * base.max(1.0) * 100.0);
        assert!((scaled - 2.5 * base).abs() < 1e-12 * base);
    }

    #[test]
    fn energy_report_on_sharp_profile() {
        // α = 2, B = B(0, 1/4): |D|Dw|²|² = (32/27)² |x|^{-2/3},
        // |Dw|^4 = (4/3)^4 |x|^{4/3}, f constant so the BV term vanishes
        let g = Grid2D::square(513, -1.0, 1.0).unwrap();
        let w = ScalarField2D::from_fn(g, sharp_w).unwrap();
        let f = ScalarField2D::constant(g, 64.0 / 81.0).unwrap();
        let ball = Region::ball((0.0, 0.0), 0.25);
        let rep = energy_inequality_report(&w, &f, 2.0, &ball).unwrap();
        assert_eq!(rep.bv_term, 0.0);
        let shifted = energy_inequality_report(&w.map(|v| v + 5.0).unwrap(), &f, 2.0, &ball).unwrap();
        assert!((shifted.ratio - rep.ratio).abs() < 1e-9 * rep.ratio);
        assert!(rep.ratio.is_finite() && rep.ratio > 0.0);
        assert!(matches!(
            energy_inequality_report(&w, &f, 1.5, &ball),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn gehring_probe_on_sharp_profile() {
        let fam = sample_family(sharp_w, 0.75, &spacings(5, 10)).unwrap();
        let r = Region::rectangle(-0.5, 0.5, -0.5, 0.5);
        let rep = gehring_probe(&fam, 2.0, &r, &Exclusion::Ridge { x: 0.0 }, &[2.0, 2.5, 3.0], true).unwrap();
        for row in &rep.rows {
            assert!(row.scan.verdict.same_class(&row.predicted.unwrap()), "{row:?}");
        }
        assert!(gehring_probe(&fam, 2.0, &r, &Exclusion::None, &[3.5], true).is_err());
        let direct = sobolev_scan(&fam, 2.0, 2.0, 0.0, &r, &Exclusion::Ridge { x: 0.0 }).unwrap();
        assert_eq!(direct, rep.rows[0].scan);
    }
}
