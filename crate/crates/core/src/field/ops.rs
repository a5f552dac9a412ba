//! Finite-difference operators on uniform grids.
//!
//! Interior nodes use second-order central stencils. The gradient switches
//! to second-order one-sided stencils on the boundary; second-derivative
//! operators copy the nearest interior value onto the boundary. Analysis
//! code only integrates over regions strictly inside the interior, so the
//! boundary values never reach a reported norm.

use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;

use super::{Grid2D, HessianField2D, Region, ScalarField2D, VectorField2D};

/// Discrete `Du`.
pub fn gradient(field: &ScalarField2D) -> VectorField2D {
    let g = *field.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let (hx, hy) = (g.hx(), g.hy());
    let u = field.values();
    let mut dx = vec![0.0; g.len()];
    let mut dy = vec![0.0; g.len()];
    for j in 0..ny {
        let row = j * nx;
        for i in 0..nx {
            let k = row + i;
            dx[k] = if i == 0 {
                (-3.0 * u[k] + 4.0 * u[k + 1] - u[k + 2]) / (2.0 * hx)
            } else if i == nx - 1 {
                (3.0 * u[k] - 4.0 * u[k - 1] + u[k - 2]) / (2.0 * hx)
            } else {
                (u[k + 1] - u[k - 1]) / (2.0 * hx)
            };
            dy[k] = if j == 0 {
                (-3.0 * u[k] + 4.0 * u[k + nx] - u[k + 2 * nx]) / (2.0 * hy)
            } else if j == ny - 1 {
                (3.0 * u[k] - 4.0 * u[k - nx] + u[k - 2 * nx]) / (2.0 * hy)
            } else {
                (u[k + nx] - u[k - nx]) / (2.0 * hy)
            };
        }
    }
    VectorField2D::from_raw(g, dx, dy)
}

/// Nearest interior node of `(i, j)`.
#[inline]
fn clamp_interior(g: &Grid2D, i: usize, j: usize) -> (usize, usize) {
    (i.clamp(1, g.nx() - 2), j.clamp(1, g.ny() - 2))
}

/// Discrete `D^2 u`; the mixed term uses the four-point cross stencil.
pub fn hessian(field: &ScalarField2D) -> HessianField2D {
    let g = *field.grid();
    let (nx, ny) = (g.nx(), g.ny());
    let (hx, hy) = (g.hx(), g.hy());
    let u = field.values();
    let n = g.len();
    let (mut xx, mut xy, mut yy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let k = j * nx + i;
            xx[k] = (u[k + 1] - 2.0 * u[k] + u[k - 1]) / (hx * hx);
            yy[k] = (u[k + nx] - 2.0 * u[k] + u[k - nx]) / (hy * hy);
            xy[k] = (u[k + nx + 1] - u[k - nx + 1] - u[k + nx - 1] + u[k - nx - 1])
                / (4.0 * hx * hy);
        }
    }
    for (i, j) in g.boundary_nodes() {
        let (ci, cj) = clamp_interior(&g, i, j);
        let (k, c) = (g.idx(i, j), g.idx(ci, cj));
        xx[k] = xx[c];
        xy[k] = xy[c];
        yy[k] = yy[c];
    }
    HessianField2D::from_raw(g, xx, xy, yy)
}

/// `u_x^2 u_xx + 2 u_x u_y u_xy + u_y^2 u_yy`, from [`gradient`] and [`hessian`].
pub fn infinity_laplacian(field: &ScalarField2D) -> ScalarField2D {
    let grad = gradient(field);
    let hess = hessian(field);
    infinity_laplacian_from(&grad, &hess)
}

pub(crate) fn infinity_laplacian_from(grad: &VectorField2D, hess: &HessianField2D) -> ScalarField2D {
    let values = (0..grad.grid().len())
        .map(|k| {
            let (gx, gy) = (grad.dx()[k], grad.dy()[k]);
            gx * gx * hess.xx()[k] + 2.0 * gx * gy * hess.xy()[k] + gy * gy * hess.yy()[k]
        })
        .collect();
    ScalarField2D::from_raw(*grad.grid(), values)
}

/// Five-point Laplacian; equals the Hessian trace at interior nodes.
pub fn laplacian(field: &ScalarField2D) -> ScalarField2D {
    let hess = hessian(field);
    laplacian_from(&hess)
}

pub(crate) fn laplacian_from(hess: &HessianField2D) -> ScalarField2D {
    let values = hess.xx().iter().zip(hess.yy()).map(|(a, b)| a + b).collect();
    ScalarField2D::from_raw(*hess.grid(), values)
}

/// `u_xx u_yy - u_xy^2`.
pub fn det_hessian(field: &ScalarField2D) -> ScalarField2D {
    let hess = hessian(field);
    let values = (0..hess.grid().len())
        .map(|k| hess.xx()[k] * hess.yy()[k] - hess.xy()[k] * hess.xy()[k])
        .collect();
    ScalarField2D::from_raw(*hess.grid(), values)
}

/// Norm exponent: finite `p >= 1` or `p = infinity`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else {
            Err(Error::Parameter(format!("norm exponent must be >= 1, got {p}")))
        }
    }
}

/// `(sum_region |v|^p hx hy)^(1/p)`, or the region maximum for `p = inf`.
pub fn lp_norm(field: &ScalarField2D, p: f64, region: &Region) -> Result<f64> {
    let p = Exponent::new(p)?;
    let idx = region.node_indices(field.grid())?;
    Ok(lp_norm_indices(field.values(), field.grid(), &idx, p))
}

pub(crate) fn lp_norm_indices(values: &[f64], grid: &Grid2D, idx: &[usize], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => idx.iter().map(|&k| values[k].abs()).fold(0.0, f64::max),
        Exponent::Finite(p) => {
            let terms: Vec<f64> = idx.iter().map(|&k| values[k].abs().powf(p)).collect();
            (pairwise_sum(&terms) * grid.cell_area()).powf(1.0 / p)
        }
    }
}
