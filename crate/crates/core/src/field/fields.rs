use crate::error::{Error, Result};

use super::Grid2D;

/// Node samples of a scalar function on a [`Grid2D`].
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField2D {
    grid: Grid2D,
    values: Vec<f64>,
}

impl ScalarField2D {
    /// Wraps `values` (row-major, `i` fastest). Every entry must be finite.
    pub fn new(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                i: k % grid.nx(),
                j: k / grid.nx(),
            });
        }
        Ok(Self { grid, values })
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = grid.nodes().map(|(i, j)| f(grid.x(i), grid.y(j))).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Grid2D, c: f64) -> Result<Self> {
        Self::new(grid, vec![c; grid.len()])
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Operator outputs: finite inputs give finite outputs barring overflow.
    pub(crate) fn from_raw(grid: Grid2D, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Pointwise map; fails if the result is not finite.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &ScalarField2D, b: f64) -> Result<Self> {
        self.grid.check_same(&other.grid, "combine")?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&u, &v)| a * u + b * v)
            .collect();
        Self::new(self.grid, values)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest `|self - other|` over the interior nodes.
    pub fn max_abs_diff_interior(&self, other: &ScalarField2D) -> Result<f64> {
        self.grid.check_same(&other.grid, "difference")?;
        Ok(self
            .grid
            .interior_nodes()
            .map(|(i, j)| (self.at(i, j) - other.at(i, j)).abs())
            .fold(0.0, f64::max))
    }
}

/// Node samples of a planar vector field (typically a discrete gradient).
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField2D {
    grid: Grid2D,
    dx: Vec<f64>,
    dy: Vec<f64>,
}

impl VectorField2D {
    pub fn new(grid: Grid2D, dx: Vec<f64>, dy: Vec<f64>) -> Result<Self> {
        for comp in [&dx, &dy] {
            if comp.len() != grid.len() {
                return Err(Error::Dimension("vector component length".into()));
            }
            if let Some(k) = comp.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    i: k % grid.nx(),
                    j: k / grid.nx(),
                });
            }
        }
        Ok(Self { grid, dx, dy })
    }

    pub(crate) fn from_raw(grid: Grid2D, dx: Vec<f64>, dy: Vec<f64>) -> Self {
        Self { grid, dx, dy }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn dx(&self) -> &[f64] {
        &self.dx
    }

    pub fn dy(&self) -> &[f64] {
        &self.dy
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> (f64, f64) {
        let k = self.grid.idx(i, j);
        (self.dx[k], self.dy[k])
    }

    /// Euclidean norm at every node.
    pub fn magnitude(&self) -> ScalarField2D {
        let values = self
            .dx
            .iter()
            .zip(&self.dy)
            .map(|(a, b)| a.hypot(*b))
            .collect();
        ScalarField2D::from_raw(self.grid, values)
    }
}

/// Second derivatives `u_xx`, `u_xy`, `u_yy`; symmetric by construction.
///
/// Boundary rows/columns hold copies of the nearest interior node
/// (see [`HessianField2D::is_extrapolated`]).
#[derive(Clone, Debug, PartialEq)]
pub struct HessianField2D {
    grid: Grid2D,
    xx: Vec<f64>,
    xy: Vec<f64>,
    yy: Vec<f64>,
}

impl HessianField2D {
    pub(crate) fn from_raw(grid: Grid2D, xx: Vec<f64>, xy: Vec<f64>, yy: Vec<f64>) -> Self {
        Self { grid, xx, xy, yy }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn xx(&self) -> &[f64] {
        &self.xx
    }

    pub fn xy(&self) -> &[f64] {
        &self.xy
    }

    pub fn yy(&self) -> &[f64] {
        &self.yy
    }

    /// `(u_xx, u_xy, u_yy)` at a node.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> (f64, f64, f64) {
        let k = self.grid.idx(i, j);
        (self.xx[k], self.xy[k], self.yy[k])
    }

    /// Boundary entries are copies, not stencil evaluations.
    pub fn is_extrapolated(&self, i: usize, j: usize) -> bool {
        self.grid.is_boundary(i, j)
    }
}
