//! Mollification of a sampled right-hand side with the standard bump
//! `exp(-1 / (1 - |z|²))`.
//!
//! The kernel is sampled on the grid offsets inside the ball of radius `eps`
//! and renormalized so the discrete weights sum to one. Output is only
//! meaningful at nodes whose whole stencil lies on the grid; the remaining
//! nodes keep the raw input and are flagged invalid.

use crate::error::{Error, Result};
use crate::field::{Grid2D, Region, ScalarField2D};
use crate::numerics::pairwise_sum;

/// Unnormalized bump profile on the unit ball.
pub fn bump(r2: f64) -> f64 {
    if r2 < 1.0 {
        (-1.0 / (1.0 - r2)).exp()
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MollifierKernel {
    width: f64,
    reach_x: usize,
    reach_y: usize,
    /// `(di, dj, weight)` with nonnegative weights summing to one.
    taps: Vec<(isize, isize, f64)>,
}

impl MollifierKernel {
    /// Samples the kernel of width `eps` on the spacing of `grid`.
    pub fn new(grid: &Grid2D, eps: f64) -> Result<Self> {
        let h = grid.hx().max(grid.hy());
        if !(eps >= 2.0 * h) {
            return Err(Error::Resolution(format!(
                "mollifier width {eps} below 2h = {}",
                2.0 * h
            )));
        }
        let (hx, hy) = (grid.hx(), grid.hy());
        let reach_x = (eps / hx).floor() as usize;
        let reach_y = (eps / hy).floor() as usize;
        let mut taps = Vec::new();
        for dj in -(reach_y as isize)..=reach_y as isize {
            for di in -(reach_x as isize)..=reach_x as isize {
                let zx = di as f64 * hx / eps;
                let zy = dj as f64 * hy / eps;
                let w = bump(zx * zx + zy * zy);
                if w > 0.0 {
                    taps.push((di, dj, w));
                }
            }
        }
        let raw: Vec<f64> = taps.iter().map(|t| t.2).collect();
        let mass = pairwise_sum(&raw);
        for t in &mut taps {
            t.2 /= mass;
        }
        Ok(Self {
            width: eps,
            reach_x,
            reach_y,
            taps,
        })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn taps(&self) -> &[(isize, isize, f64)] {
        &self.taps
    }

    pub fn weight_sum(&self) -> f64 {
        let w: Vec<f64> = self.taps.iter().map(|t| t.2).collect();
        pairwise_sum(&w)
    }

    /// Discrete first moment `Σ w |z₁|` in physical units.
    pub fn first_moment_x(&self, hx: f64) -> f64 {
        let w: Vec<f64> = self
            .taps
            .iter()
            .map(|&(di, _, w)| w * (di as f64 * hx).abs())
            .collect();
        pairwise_sum(&w)
    }
}

/// Mollified field plus the mask of nodes where the convolution is complete.
#[derive(Clone, Debug, PartialEq)]
pub struct Mollified {
    pub field: ScalarField2D,
    pub valid: Vec<bool>,
    pub eps: f64,
}

impl Mollified {
    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|&&v| v).count()
    }

    /// Ensures every node of `region` (closed) was fully convolved.
    pub fn check_region(&self, region: &Region) -> Result<()> {
        let idx = region.closed_node_indices(self.field.grid())?;
        if idx.iter().all(|&k| self.valid[k]) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "region lies within eps = {} of the grid edge",
                self.eps
            )))
        }
    }
}

pub fn mollify(f: &ScalarField2D, eps: f64) -> Result<Mollified> {
    let grid = *f.grid();
    let kernel = MollifierKernel::new(&grid, eps)?;
    let (nx, ny) = (grid.nx(), grid.ny());
    if 2 * kernel.reach_x >= nx || 2 * kernel.reach_y >= ny {
        return Err(Error::Domain(format!(
            "eps = {eps} leaves no node with a full stencil"
        )));
    }
    let src = f.values();
    let mut out = src.to_vec();
    let mut valid = vec![false; grid.len()];
    let mut terms = Vec::with_capacity(kernel.taps.len());
    for j in kernel.reach_y..ny - kernel.reach_y {
        for i in kernel.reach_x..nx - kernel.reach_x {
            terms.clear();
            for &(di, dj, w) in &kernel.taps {
                let ii = (i as isize + di) as usize;
                let jj = (j as isize + dj) as usize;
                terms.push(w * src[grid.idx(ii, jj)]);
            }
            let k = grid.idx(i, j);
            out[k] = pairwise_sum(&terms);
            valid[k] = true;
        }
    }
    Ok(Mollified {
        field: ScalarField2D::from_raw(grid, out),
        valid,
        eps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SupNormControl {
    pub mollified_sup: f64,
    pub raw_sup: f64,
}

impl SupNormControl {
    pub fn holds(&self) -> bool {
        self.mollified_sup <= self.raw_sup
    }
}

/// Sup of `f^eps` over the valid nodes against the sup of `f` over the whole
/// grid (which contains every stencil).
pub fn sup_norm_control(f: &ScalarField2D, eps: f64) -> Result<SupNormControl> {
    let m = mollify(f, eps)?;
    let mollified_sup = m
        .field
        .values()
        .iter()
        .zip(&m.valid)
        .filter(|(_, &ok)| ok)
        .fold(0.0f64, |acc, (v, _)| acc.max(v.abs()));
    Ok(SupNormControl {
        mollified_sup,
        raw_sup: f.max_abs(),
    })
}
