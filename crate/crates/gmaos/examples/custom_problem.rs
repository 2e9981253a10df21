//! Solving a user-defined objective.
//!
//! A `Problem` is just three closures: objective, gradient (written into a
//! caller-provided buffer) and default start.

use gmaos::problems::Problem;
use gmaos::{solve, SolverConfig};

fn main() {
    // f(x) = sum_i exp(x_i) - x_i, minimized at x = 0 with f = n.
    let n = 200;
    let problem = Problem::new(
        "sum_exp",
        n,
        |x| x.iter().map(|xi| xi.exp() - xi).sum(),
        |x, g| {
            for (gi, xi) in g.iter_mut().zip(x) {
                *gi = xi.exp() - 1.0;
            }
        },
        |x| x.fill(0.7),
    );

    let report = solve(&problem, &problem.default_start(), &SolverConfig::default());
    println!(
        "{}: {} in {} iterations, f = {:.12} (expect {})",
        problem.name(),
        report.status.as_str(),
        report.n_iter,
        report.final_f,
        n
    );
}
