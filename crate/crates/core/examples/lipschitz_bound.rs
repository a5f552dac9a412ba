//! Interior Lipschitz estimate on the exact profile and on a viscous solution.

use inflap::field::{Region, ScalarField2D};
use inflap::problems;
use inflap::viscous::{lipschitz_bound_check, solve_viscous, ViscousRunConfig};

fn main() -> inflap::Result<()> {
    let p = problems::lookup("sharp-w")?;
    let grid = p.grid(129)?;
    let w = p.exact_field(grid).expect("exact solution")?;
    let f = p.source_field(grid)?;
    for radius in [0.1, 0.2, 0.4] {
        let chk = lipschitz_bound_check(&w, &f, &Region::ball((0.0, 0.0), radius))?;
        println!("w, R = {radius}: Lip {:.4}  bound {:.4}  ratio {:.3}", chk.lipschitz, chk.bound, chk.ratio);
    }

    let t = problems::lookup("tilted")?;
    let grid = t.grid(33)?;
    let f = t.source_field(grid)?;
    let g = t.boundary_field(grid)?;
    let sol = solve_viscous(&f, &g, &ViscousRunConfig::new(vec![0.2, 0.1], 1e-8, 2_000_000), None)?;
    let shifted: ScalarField2D = sol.u_eps.map(|v| v + 3.0)?;
    for (label, u) in [("u", &sol.u_eps), ("u + 3", &shifted)] {
        let chk = lipschitz_bound_check(u, &f, &Region::ball((0.0, 0.0), 0.4))?;
        println!("tilted viscous {label}: osc {:.4}, ratio {:.4}", chk.oscillation, chk.ratio);
    }
    Ok(())
}
