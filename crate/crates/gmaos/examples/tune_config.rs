//! Adjusting solver parameters: tighter tolerance and a monotone line
//! search (eta = 0), via the config text format and directly.

use gmaos::{problems, solve, SolverConfig};

fn main() {
    let problem = problems::by_name("ext_white_holst", 500).unwrap();
    let x0 = problem.default_start();

    let defaults = SolverConfig::default();

    // Same overrides, expressed as the config text the CLI accepts.
    let tuned = SolverConfig::parse("epsilon=1e-8\neta_max=0\n").unwrap();

    for (label, cfg) in [("defaults", &defaults), ("tight+monotone", &tuned)] {
        let report = solve(&problem, &x0, cfg);
        println!(
            "{label:<15} status={} iters={} nf={} |g|_inf={:.2e}",
            report.status.as_str(),
            report.n_iter,
            report.n_feval,
            report.final_gnorm_inf
        );
    }

    println!("\neffective tuned configuration:\n{}", tuned.dump());
}
