//! Local energy inequality ratios and the BV norm of the source that enters them.

use inflap::analyzer::{bv_norm, energy_inequality_report};
use inflap::field::{Grid2D, Region, ScalarField2D};
use inflap::problems::{sharp_w, SHARP_SOURCE};

fn main() -> inflap::Result<()> {
    // the region must sit strictly inside the grid
    let unit = Grid2D::square(49, -0.25, 1.25)?;
    let ramp = ScalarField2D::from_fn(unit, |x, _| x)?;
    println!("|x1|_BV on the unit square: {:.6}", bv_norm(&ramp, &Region::rectangle(0.0, 1.0, 0.0, 1.0))?);

    let grid = Grid2D::square(257, -1.0, 1.0)?;
    let w = ScalarField2D::from_fn(grid, sharp_w)?;
    let f = ScalarField2D::constant(grid, SHARP_SOURCE)?;
    let ball = Region::ball((0.0, 0.0), 0.25);
    for alpha in [1.75, 2.0, 2.5] {
        let rep = energy_inequality_report(&w, &f, alpha, &ball)?;
        println!(
            "alpha {alpha:<4} lhs {:.4e}  gradient term {:.4e}  bv term {:.4e}  ratio {:.4}",
            rep.lhs, rep.gradient_term, rep.bv_term, rep.ratio
        );
    }
    Ok(())
}
