//! Closed-form 1-D solve of the sharp case, f = 64/81 with u(0) = u(1) = -2^(-4/3).
//!
//!     cargo run --release --example solve_1d -- [n]

use inflap::oned::{residual_1d, solve_1d, OneDProblem};

fn main() -> inflap::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1025);
    let edge = -(0.5f64).powf(4.0 / 3.0);
    let problem = OneDProblem::from_fn(n, |_| 64.0 / 81.0, edge, edge)?;
    let sol = solve_1d(&problem, 1e-13)?;

    let exact = |t: f64| -(t - 0.5f64).abs().powf(4.0 / 3.0);
    let err = sol
        .nodes()
        .iter()
        .zip(sol.u())
        .fold(0.0f64, |m, (&t, &u)| m.max((u - exact(t)).abs()));
    println!("n = {n}, c = {:.3e}, bisection steps {}", sol.c(), sol.bisection_iters());
    if let Some(t0) = sol.t0() {
        println!("u' vanishes at t0 = {:.6} (interior: {})", t0.t, t0.interior);
    }
    println!("max nodal error {err:.3e}, convexity {:?}", sol.convexity());

    let res = residual_1d(&sol, 0.5);
    println!(
        "ODE residual with |u'| > {}: analytic {:.2e}, finite difference {:.2e} over {} nodes",
        res.mask, res.analytic_max_rel, res.fd_max_rel, res.checked
    );
    Ok(())
}
