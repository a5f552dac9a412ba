//! Distances between consecutive viscous stages for f = 1, g = 0.

use inflap::problems;
use inflap::viscous::{continuation_study, ViscousRunConfig};

fn main() -> inflap::Result<()> {
    let p = problems::lookup("const-f-zero-g")?;
    let grid = p.grid(33)?;
    let f = p.source_field(grid)?;
    let g = p.boundary_field(grid)?;
    let cfg = ViscousRunConfig::new(ViscousRunConfig::geometric_schedule(0.4, 0.5, 6), 1e-7, 2_000_000);
    let table = continuation_study(&f, &g, &cfg)?;
    for row in &table.rows {
        println!("eps {:.4}  sup |u_eps - u_prev| {:.4e}", row.eps, row.distance);
    }
    println!("strictly decreasing: {}", table.strictly_decreasing());
    Ok(())
}
