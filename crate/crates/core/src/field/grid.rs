use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform rectangular node grid. Node `(i, j)` sits at
/// `(x_min + i * hx, y_min + j * hy)`; storage is row-major with `i` fastest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    nx: usize,
    ny: usize,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::Dimension(format!(
                "grid needs at least 3 nodes per axis, got {nx} x {ny}"
            )));
        }
        let bounds = [x_min, x_max, y_min, y_max];
        if bounds.iter().any(|b| !b.is_finite()) || x_max <= x_min || y_max <= y_min {
            return Err(Error::Dimension(format!(
                "degenerate bounds [{x_min}, {x_max}] x [{y_min}, {y_max}]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x_min,
            x_max,
            y_min,
            y_max,
        })
    }

    /// `n x n` nodes on `[lo, hi]^2`.
    pub fn square(n: usize, lo: f64, hi: f64) -> Result<Self> {
        Self::new(n, n, lo, hi, lo, hi)
    }

    /// Square grid on `[lo, hi]^2` whose spacing is exactly `h`.
    pub fn square_with_spacing(lo: f64, hi: f64, h: f64) -> Result<Self> {
        let cells = (hi - lo) / h;
        let n = cells.round();
        if h <= 0.0 || (cells - n).abs() > 1e-9 * cells.max(1.0) {
            return Err(Error::Dimension(format!(
                "spacing {h} does not divide [{lo}, {hi}]"
            )));
        }
        Self::square(n as usize + 1, lo, hi)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn hx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// Smaller of the two spacings.
    pub fn h(&self) -> f64 {
        self.hx().min(self.hy())
    }

    pub fn cell_area(&self) -> f64 {
        self.hx() * self.hy()
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.hx()
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.hy()
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn is_interior(&self, i: usize, j: usize) -> bool {
        i >= 1 && i + 1 < self.nx && j >= 1 && j + 1 < self.ny
    }

    #[inline]
    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        !self.is_interior(i, j)
    }

    /// All node indices `(i, j)` in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
    }

    pub fn interior_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..self.ny - 1).flat_map(move |j| (1..self.nx - 1).map(move |i| (i, j)))
    }

    pub fn boundary_nodes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.nodes().filter(move |&(i, j)| self.is_boundary(i, j))
    }

    pub fn same_shape(&self, other: &Grid2D) -> bool {
        self == other
    }

    pub(crate) fn check_same(&self, other: &Grid2D, what: &str) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what}: grid mismatch ({} x {} vs {} x {})",
                self.nx, self.ny, other.nx, other.ny
            )))
        }
    }
}
