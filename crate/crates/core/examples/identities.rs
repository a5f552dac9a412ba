//! Discrete identity checks: the determinant identity on a polynomial, and
//! the pointwise and chain identities on w = -|x1|^(4/3) under refinement.

use inflap::field::{Grid2D, ScalarField2D};
use inflap::identities::{
    check_chain_identity, check_determinant_identity, check_pointwise_identity,
    default_mask_threshold,
};
use inflap::problems::{sharp_w, SHARP_SOURCE};

fn main() -> inflap::Result<()> {
    let grid = Grid2D::square(65, -1.0, 1.0)?;
    let poly = ScalarField2D::from_fn(grid, |x, y| x.powi(4) - 2.0 * x * x * y + 0.5 * y.powi(3) + x * y)?;
    let det = check_determinant_identity(&poly, 0.0, None, 0.0)?;
    println!("determinant identity on a quartic: max error {:.2e}", det.max_rel_error);

    println!("{:>8} {:>12} {:>12} {:>10}", "h", "pw", "chain", "excluded");
    for k in 5..=8 {
        let grid = Grid2D::square_with_spacing(-1.0, 1.0, 2f64.powi(-k))?;
        let w = ScalarField2D::from_fn(grid, sharp_w)?;
        let f = ScalarField2D::constant(grid, SHARP_SOURCE)?;
        let mask = default_mask_threshold(grid.h());
        let pw = check_pointwise_identity(&w, &f, 2.0, mask)?;
        let chain = check_chain_identity(&w, 1.5, 1.0, mask)?;
        println!(
            "{:>8.5} {:>12.3e} {:>12.3e} {:>10.3}",
            grid.h(),
            pw.max_rel_error,
            chain.max_rel_error,
            pw.excluded_fraction
        );
    }
    Ok(())
}
