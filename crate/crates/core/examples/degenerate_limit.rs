//! Ratio (u(t) - u(t0)) / |t - t0|^(4/3) near the zero of u' against
//! -(3/4) (3 f(t0))^(1/3), for a source that is not constant.

use inflap::oned::{degenerate_limit_check, solve_1d, OneDProblem};

fn main() -> inflap::Result<()> {
    let problem = OneDProblem::from_fn(2049, |t| -(1.0 + t * t), 0.0, 0.1)?;
    let sol = solve_1d(&problem, 1e-13)?;
    let lim = degenerate_limit_check(&sol)?;
    println!("t0 = {:.6}", lim.t0);
    println!("{:>10} {:>14} {:>14}", "delta", "right", "left");
    for ((d, r), l) in lim.offsets.iter().zip(&lim.right).zip(&lim.left) {
        println!("{d:>10.2e} {r:>14.8} {l:>14.8}");
    }
    println!(
        "limit {:.8} vs {:.8} (relative deviation {:.2e})",
        lim.measured, lim.expected, lim.deviation
    );
    Ok(())
}
