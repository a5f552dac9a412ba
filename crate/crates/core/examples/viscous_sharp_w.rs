//! Vanishing-viscosity continuation towards w = -|x1|^(4/3) on [-1,1]².
//!
//!     cargo run --release --example viscous_sharp_w -- [n] [stages]

use inflap::problems;
use inflap::viscous::{continuation_from, solve_viscous, ViscousRunConfig};

fn main() -> inflap::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(33);
    let stages: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);

    let p = problems::lookup("sharp-w")?;
    let grid = p.grid(n)?;
    let f = p.source_field(grid)?;
    let g = p.boundary_field(grid)?;
    let exact = p.exact_field(grid).expect("sharp-w has an exact solution")?;

    let schedule = ViscousRunConfig::geometric_schedule(0.5, 0.5, stages);
    let cfg = ViscousRunConfig::new(schedule, 1e-6, 2_000_000);
    let sol = solve_viscous(&f, &g, &cfg, None)?;

    println!("{:>10} {:>9} {:>11} {:>11}", "eps", "sweeps", "residual", "sup error");
    for (stage, u) in sol.stages.iter().zip(&sol.stage_fields) {
        println!(
            "{:>10.5} {:>9} {:>11.2e} {:>11.3e}",
            stage.eps,
            stage.iters,
            stage.residual,
            u.max_abs_diff_interior(&exact)?
        );
    }
    let table = continuation_from(&sol);
    println!("stage distances strictly decreasing: {}", table.strictly_decreasing());
    Ok(())
}
