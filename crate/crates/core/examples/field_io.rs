//! Writing a field to CSV and reading it back, plus the basic derived fields.

use inflap::field::io::{read_field, write_field};
use inflap::field::{gradient, infinity_laplacian, lp_norm, Grid2D, Region, ScalarField2D};

fn main() -> inflap::Result<()> {
    let grid = Grid2D::square(17, -1.0, 1.0)?;
    let u = ScalarField2D::from_fn(grid, |x, y| x * x - y * y + 0.5 * x * y)?;

    let mut buf = Vec::new();
    write_field(&u, &mut buf)?;
    let back = read_field(buf.as_slice())?;
    println!("round trip exact: {}", back == u);

    let grad = gradient(&u).magnitude();
    let linf = infinity_laplacian(&u);
    let disc = Region::ball((0.0, 0.0), 0.5);
    println!("max |Du| {:.4}, ||Δ∞u||_L2(B) {:.4}", grad.max_abs(), lp_norm(&linf, 2.0, &disc)?);
    Ok(())
}
