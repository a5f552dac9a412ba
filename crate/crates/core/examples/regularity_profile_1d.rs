//! Cutoff integrals of |(|u'|^α)'|^p on the 1-D sharp solution, classified
//! against the cutoff width. α = 1.5, p = 2 sits on the critical line.

use inflap::oned::{oned_regularity_profile, solve_1d, OneDProblem};

fn main() -> inflap::Result<()> {
    let edge = -(0.5f64).powf(4.0 / 3.0);
    let sol = solve_1d(&OneDProblem::from_fn(16385, |_| 64.0 / 81.0, edge, edge)?, 1e-13)?;
    for (alpha, p) in [(1.5, 2.0), (2.0, 2.0), (1.0, 1.5), (1.0, 2.0)] {
        let prof = oned_regularity_profile(&sol, alpha, p)?;
        println!(
            "alpha {alpha:<4} p {p:<4} -> {:<16} log slope {:.3}",
            prof.fit.verdict.label(),
            prof.fit.log_slope
        );
    }
    Ok(())
}
