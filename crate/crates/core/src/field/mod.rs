//! Uniform-grid scalar fields and the finite-difference operators every
//! other module consumes.

mod fields;
mod grid;
pub mod io;
pub mod ops;
mod region;

pub use fields::{HessianField2D, ScalarField2D, VectorField2D};
pub use grid::Grid2D;
pub use ops::{det_hessian, gradient, hessian, infinity_laplacian, laplacian, lp_norm, Exponent};
pub use region::Region;
