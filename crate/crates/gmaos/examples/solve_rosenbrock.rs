//! Minimal solve: extended Rosenbrock at n = 1000 with default settings.
//!
//! Run with `cargo run --example solve_rosenbrock`.

use gmaos::{problems, solve, SolverConfig};

fn main() {
    let problem = problems::by_name("ext_rosenbrock", 1000).unwrap();
    let report = solve(&problem, &problem.default_start(), &SolverConfig::default());

    println!("status         {}", report.status.as_str());
    println!("iterations     {}", report.n_iter);
    println!("f evaluations  {}", report.n_feval);
    println!("g evaluations  {}", report.n_geval);
    println!("final f        {:.6e}", report.final_f);
    println!("final |g|_inf  {:.3e}", report.final_gnorm_inf);
}
