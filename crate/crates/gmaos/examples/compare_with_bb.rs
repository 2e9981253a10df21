//! Head-to-head function-evaluation counts against the BB baseline on the
//! whole test collection.

use gmaos::{problems, solve, solve_bb, SolverConfig};

fn main() {
    let cfg = SolverConfig::default();
    println!("{:<22} {:>10} {:>10}  winner", "problem", "gmaos nf", "bb nf");
    let mut wins = 0;
    let mut total = 0;
    for p in problems::registry(1000) {
        let x0 = p.default_start();
        let a = solve(&p, &x0, &cfg);
        let b = solve_bb(&p, &x0, &cfg);
        let winner = match a.n_feval.cmp(&b.n_feval) {
            std::cmp::Ordering::Less => "gmaos",
            std::cmp::Ordering::Greater => "bb",
            std::cmp::Ordering::Equal => "tie",
        };
        if winner == "gmaos" {
            wins += 1;
        }
        total += 1;
        println!("{:<22} {:>10} {:>10}  {}", p.name(), a.n_feval, b.n_feval, winner);
    }
    println!("\ngmaos strictly ahead on {wins}/{total} problems");
}
