//! Per-iteration trace: stepsize branch, closeness measure and the
//! nonmonotone reference value on an ill-conditioned quadratic.

use gmaos::{problems, solve, SolverConfig};

fn main() {
    let mut cfg = SolverConfig::default();
    cfg.collect_trace = true;
    let problem = problems::diag_quadratic(50, 1e3);
    let report = solve(&problem, &problem.default_start(), &cfg);

    println!("{:>4} {:>13} {:>10} {:>10} {:>16} {:>10}", "k", "f", "|g|_inf", "alpha", "branch", "mu");
    for row in report.trace.as_ref().unwrap().iter().take(25) {
        println!(
            "{:>4} {:>13.5e} {:>10.2e} {:>10.3e} {:>16} {:>10}",
            row.k,
            row.f,
            row.gnorm_inf,
            row.alpha,
            row.branch.as_str(),
            row.mu.map_or("-".to_string(), |m| format!("{m:.1e}")),
        );
    }
    println!("... {} iterations total, status {}", report.n_iter, report.status.as_str());

    let h = &report.branch_histogram;
    println!(
        "branches: conic {} quadratic {} fd {} bb-like {} scaled {} initial {}",
        h.conic, h.quadratic_bfgs, h.fallback_fd, h.fallback_bb_like, h.fallback_scaled, h.initial
    );
}
