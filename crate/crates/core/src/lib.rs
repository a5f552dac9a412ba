//! Numerical laboratory for the inhomogeneous infinity-Laplace equation
//! `-Δ∞u = f` in the plane.
//!
//! The crate solves the equation in one dimension from its closed form and
//! in two dimensions through the vanishing-viscosity approximation
//! `-Δ∞u - εΔu = f`, and measures the Sobolev regularity of `|Du|^α`
//! on computed and exact solutions:
//!
//! - [`field`]: uniform grids, scalar fields, finite-difference operators.
//! - [`identities`]: pointwise identities checked on sampled fields.
//! - [`oned`]: the one-dimensional viscosity solution by shooting.
//! - [`mollify`]: standard mollification of the right-hand side.
//! - [`viscous`]: pseudo-time relaxation with ε-continuation.
//! - [`analyzer`]: discrete Sobolev/BV norms and mesh-refinement verdicts.
//! - [`rates`]: the three-model (bounded / logarithmic / power) fit.
//! - [`problems`]: named analytic test problems.
//! - [`cli`]: the batch experiment runner behind the `inflap` binary.

pub mod analyzer;
pub mod cli;
pub mod error;
pub mod field;
pub mod identities;
pub mod mollify;
pub mod numerics;
pub mod oned;
pub mod problems;
pub mod rates;
pub mod viscous;

pub use error::{Error, Result};
