//! Full benchmark matrix plus Dolan-More performance profiles, written to
//! `records.csv` and `profiles.json` in the current directory.

use std::path::Path;

use gmaos::bench::{self, Metric, SolverKind};
use gmaos::{problems, SolverConfig};

fn main() {
    let cfg = SolverConfig::default();
    let problems = problems::registry(1000);
    let solvers = [SolverKind::Gmaos, SolverKind::Bb];

    let records = bench::run_matrix(&solvers, &problems, &cfg, 4);
    bench::write_records_csv(Path::new("records.csv"), &records).unwrap();

    let mut curves = Vec::new();
    for metric in Metric::ALL {
        curves.extend(bench::performance_profile(&records, metric));
    }
    bench::write_profiles_json(Path::new("profiles.json"), &curves).unwrap();

    // rho_s(1) is the fraction of problems each solver wins outright.
    for curve in curves.iter().filter(|c| c.metric == "n_feval") {
        let rho1 = curve
            .points
            .iter()
            .filter(|(t, _)| *t <= 1.0)
            .map(|(_, r)| *r)
            .last()
            .unwrap_or(0.0);
        println!("{:<8} rho(1) = {:.2} on function evaluations", curve.solver, rho1);
    }
    println!("wrote records.csv and profiles.json");
}
