//! Named analytic test problems for the two-dimensional solver.

use crate::error::{Error, Result};
use crate::field::{Grid2D, ScalarField2D};

/// `-Δ∞w = 64/81` for `w = -|x₁|^{4/3}`.
pub const SHARP_SOURCE: f64 = 64.0 / 81.0;

pub fn sharp_w(x: f64, _y: f64) -> f64 {
    -x.abs().powf(4.0 / 3.0)
}

/// `|Dw| = (4/3) |x₁|^{1/3}`.
pub fn sharp_w_gradient_norm(x: f64, _y: f64) -> f64 {
    4.0 / 3.0 * x.abs().cbrt()
}

#[derive(Clone, Copy, Debug)]
pub struct Problem {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: fn(f64, f64) -> f64,
    pub boundary: fn(f64, f64) -> f64,
    pub exact: Option<fn(f64, f64) -> f64>,
    /// Default square `[lo, hi]²`.
    pub domain: (f64, f64),
}

fn sharp_source(_: f64, _: f64) -> f64 {
    SHARP_SOURCE
}

fn unit_source(_: f64, _: f64) -> f64 {
    1.0
}

fn zero(_: f64, _: f64) -> f64 {
    0.0
}

fn bump_source(x: f64, y: f64) -> f64 {
    1.0 + 0.5 * x * y
}

fn tilted_boundary(x: f64, y: f64) -> f64 {
    0.5 * x - 0.25 * y + 0.25 * x * y
}

pub const REGISTRY: [Problem; 3] = [
    Problem {
        name: "sharp-w",
        summary: "f = 64/81, boundary and exact solution w = -|x1|^(4/3)",
        source: sharp_source,
        boundary: sharp_w,
        exact: Some(sharp_w),
        domain: (-1.0, 1.0),
    },
    Problem {
        name: "const-f-zero-g",
        summary: "f = 1, zero boundary data",
        source: unit_source,
        boundary: zero,
        exact: None,
        domain: (-1.0, 1.0),
    },
    Problem {
        name: "tilted",
        summary: "f = 1 + xy/2, boundary x/2 - y/4 + xy/4",
        source: bump_source,
        boundary: tilted_boundary,
        exact: None,
        domain: (-1.0, 1.0),
    },
];

pub fn lookup(name: &str) -> Result<&'static Problem> {
    REGISTRY.iter().find(|p| p.name == name).ok_or_else(|| {
        let known: Vec<&str> = REGISTRY.iter().map(|p| p.name).collect();
        Error::Parameter(format!("unknown problem {name:?}; known: {}", known.join(", ")))
    })
}

impl Problem {
    pub fn grid(&self, n: usize) -> Result<Grid2D> {
        Grid2D::square(n, self.domain.0, self.domain.1)
    }

    pub fn source_field(&self, grid: Grid2D) -> Result<ScalarField2D> {
        ScalarField2D::from_fn(grid, self.source)
    }

    /// Boundary data sampled on every node; the solver reads the boundary only.
    pub fn boundary_field(&self, grid: Grid2D) -> Result<ScalarField2D> {
        ScalarField2D::from_fn(grid, self.boundary)
    }

    pub fn exact_field(&self, grid: Grid2D) -> Option<Result<ScalarField2D>> {
        self.exact.map(|u| ScalarField2D::from_fn(grid, u))
    }
}
