//! Central-difference verification of every analytic gradient in the
//! collection, at the default start of each problem.

use gmaos::problems;

fn main() {
    let mut worst: (String, f64) = (String::new(), 0.0);
    for p in problems::registry(100) {
        let err = problems::check_gradient(&p, &p.default_start(), None).unwrap();
        println!("{:<22} max rel err {:.3e}", p.name(), err);
        if err > worst.1 {
            worst = (p.name().to_string(), err);
        }
    }
    println!("\nworst: {} at {:.3e}", worst.0, worst.1);
}
