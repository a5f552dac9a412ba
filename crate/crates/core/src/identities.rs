//! Pointwise identities satisfied by solutions of `-Δ∞u = f`, checked on
//! sampled fields.
//!
//! All three checks work on interior nodes. The two identities that divide
//! by powers of `|Du|` skip nodes where `|Du| <= mask_threshold` and report
//! the excluded fraction; the identities hold almost everywhere and the
//! degenerate set has measure zero.
//!
//! The pointwise identity is `-(|Du|^α)_i u_i = α |Du|^(α-2) f`. The factor
//! is `α`: from `Δ∞u = ½ (|Du|²)_i u_i` one gets `(|Du|²)_i u_i = -2f`, and
//! the chain rule for `|Du|^α = (|Du|²)^(α/2)` gives the stated form. A
//! factor `2α` is inconsistent with that derivation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{gradient, hessian, ScalarField2D};
use crate::numerics::{max_of, pairwise_mean};

/// Relative errors below this fraction of the largest reference magnitude
/// are measured against the fraction instead (both sides vanish).
const RELATIVE_FLOOR: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Determinant,
    PointwisePw,
    Chain,
}

/// Residual statistics of one identity check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: IdentityKind,
    pub max_rel_error: f64,
    pub mean_rel_error: f64,
    pub excluded_fraction: f64,
    pub mask_threshold: f64,
    pub checked_nodes: usize,
}

/// Default degeneracy threshold `2 h^(1/4)` on `|Du|`.
///
/// For a profile with `|Du| ~ |x|^(1/3)` this excludes a band of width
/// `~ h^(3/4)` around the degenerate set, which is many cells wide and still
/// shrinks with `h`; masked errors therefore decrease under refinement.
pub fn default_mask_threshold(h: f64) -> f64 {
    2.0 * h.powf(0.25)
}

/// `(-det D²v) |Dv|² = |D²v Dv|² - Δv Δ∞v`, an algebraic identity for 2×2
/// symmetric matrices. With `f` supplied, checks the solution form
/// `(-det D²u) |Du|² = |D²u Du|² + ε (Δu)² + f Δu` obtained by substituting
/// `-Δ∞u = εΔu + f`.
///
/// Errors are normalized by `1 + |LHS| + |RHS|`. Nodes with `|Du| <=
/// mask_threshold` are skipped (pass `0.0` to keep all interior nodes).
pub fn check_determinant_identity(
    field: &ScalarField2D,
    eps: f64,
    f: Option<&ScalarField2D>,
    mask_threshold: f64,
) -> Result<IdentityReport> {
    let grid = *field.grid();
    if let Some(f) = f {
        grid.check_same(f.grid(), "determinant identity")?;
    } else if eps != 0.0 {
        return Err(Error::Parameter(
            "structural determinant form takes eps = 0".into(),
        ));
    }
    if eps < 0.0 || mask_threshold < 0.0 {
        return Err(Error::Parameter("eps and mask_threshold must be >= 0".into()));
    }
    let grad = gradient(field);
    let hess = hessian(field);
    let mut errs = Vec::new();
    let mut excluded = 0usize;
    for (i, j) in grid.interior_nodes() {
        let (gx, gy) = grad.at(i, j);
        let g2 = gx * gx + gy * gy;
        if mask_threshold > 0.0 && g2.sqrt() <= mask_threshold {
            excluded += 1;
            continue;
        }
        let (hxx, hxy, hyy) = hess.at(i, j);
        let lhs = -(hxx * hyy - hxy * hxy) * g2;
        let (hgx, hgy) = (hxx * gx + hxy * gy, hxy * gx + hyy * gy);
        let hg2 = hgx * hgx + hgy * hgy;
        let lap = hxx + hyy;
        let rhs = match f {
            None => {
                let inf_lap = gx * gx * hxx + 2.0 * gx * gy * hxy + gy * gy * hyy;
                hg2 - lap * inf_lap
            }
            Some(f) => hg2 + eps * lap * lap + f.at(i, j) * lap,
        };
        errs.push((lhs - rhs).abs() / (1.0 + lhs.abs() + rhs.abs()));
    }
    Ok(report(
        IdentityKind::Determinant,
        &errs,
        excluded,
        mask_threshold,
    ))
}

/// `-<D(|Du|^α), Du> = α |Du|^(α-2) f` at masked interior nodes.
pub fn check_pointwise_identity(
    u: &ScalarField2D,
    f: &ScalarField2D,
    alpha: f64,
    mask_threshold: f64,
) -> Result<IdentityReport> {
    if !(alpha > 0.0) {
        return Err(Error::Parameter(format!("alpha must be > 0, got {alpha}")));
    }
    check_mask(mask_threshold)?;
    let grid = *u.grid();
    grid.check_same(f.grid(), "pointwise identity")?;
    let grad = gradient(u);
    let mag = grad.magnitude();
    let pow = mag.map(|m| m.powf(alpha))?;
    let dpow = gradient(&pow);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut excluded = 0usize;
    for (i, j) in grid.interior_nodes() {
        let m = mag.at(i, j);
        if m <= mask_threshold {
            excluded += 1;
            continue;
        }
        let (gx, gy) = grad.at(i, j);
        let (px, py) = dpow.at(i, j);
        lhs.push(-(px * gx + py * gy));
        rhs.push(alpha * m.powf(alpha - 2.0) * f.at(i, j));
    }
    let scale = RELATIVE_FLOOR * max_of(&rhs.iter().map(|v| v.abs()).collect::<Vec<_>>()).max(1.0);
    let errs: Vec<f64> = lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).abs() / b.abs().max(scale))
        .collect();
    Ok(report(
        IdentityKind::PointwisePw,
        &errs,
        excluded,
        mask_threshold,
    ))
}

/// `|Du|^τ D|Du|^α = α/(α+τ) D|Du|^(α+τ)` at masked interior nodes.
pub fn check_chain_identity(
    u: &ScalarField2D,
    alpha: f64,
    tau: f64,
    mask_threshold: f64,
) -> Result<IdentityReport> {
    if !(alpha > 0.0) || !(tau > 0.0) {
        return Err(Error::Parameter(format!(
            "alpha and tau must be > 0, got {alpha}, {tau}"
        )));
    }
    check_mask(mask_threshold)?;
    let grid = *u.grid();
    let mag = gradient(u).magnitude();
    let d_alpha = gradient(&mag.map(|m| m.powf(alpha))?);
    let d_sum = gradient(&mag.map(|m| m.powf(alpha + tau))?);
    let ratio = alpha / (alpha + tau);
    let mut diffs = Vec::new();
    let mut refs = Vec::new();
    let mut excluded = 0usize;
    for (i, j) in grid.interior_nodes() {
        let m = mag.at(i, j);
        if m <= mask_threshold {
            excluded += 1;
            continue;
        }
        let w = m.powf(tau);
        let (ax, ay) = d_alpha.at(i, j);
        let (bx, by) = d_sum.at(i, j);
        let (bx, by) = (ratio * bx, ratio * by);
        diffs.push((w * ax - bx).hypot(w * ay - by));
        refs.push(bx.hypot(by));
    }
    let scale = RELATIVE_FLOOR * max_of(&refs).max(1.0);
    let errs: Vec<f64> = diffs
        .iter()
        .zip(&refs)
        .map(|(d, r)| d / r.max(scale))
        .collect();
    Ok(report(IdentityKind::Chain, &errs, excluded, mask_threshold))
}

fn check_mask(mask_threshold: f64) -> Result<()> {
    if mask_threshold.is_finite() && mask_threshold >= 0.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "mask_threshold must be finite and >= 0, got {mask_threshold}"
        )))
    }
}

fn report(kind: IdentityKind, errs: &[f64], excluded: usize, mask: f64) -> IdentityReport {
    let total = errs.len() + excluded;
    IdentityReport {
        identity: kind,
        max_rel_error: max_of(errs),
        mean_rel_error: pairwise_mean(errs),
        excluded_fraction: if total == 0 {
            0.0
        } else {
            excluded as f64 / total as f64
        },
        mask_threshold: mask,
        checked_nodes: errs.len(),
    }
}
