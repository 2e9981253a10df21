//! Gradient method with approximately optimal stepsizes.
//!
//! The stepsize of each gradient step is taken as the exact minimizer of a
//! cheap one-dimensional approximation model of `f(x_k - alpha * g_k)`.
//! When the objective does not look quadratic on the last segment, a conic
//! (rational-quadratic) model is used; otherwise a quadratic model built
//! from a rank-two curvature update of a scalar matrix, with Barzilai-Borwein
//! truncation and dedicated fallbacks for non-positive curvature.
//!
//! The crate ships:
//!
//! - [`problems`]: a collection of smooth test functions with analytic
//!   gradients and a finite-difference gradient checker,
//! - [`model_stepsize`]: every stepsize formula (BB ratios, conic model,
//!   quadratic model, fallbacks),
//! - [`linesearch`]: the Zhang-Hager nonmonotone line search,
//! - [`solver`]: the main driver plus a plain-BB baseline,
//! - [`bench`]: a solver-by-problem benchmark matrix and Dolan-More
//!   performance profiles,
//! - [`cli`]: the `gmaos` command-line front end.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability.

pub mod bench;
pub mod cli;
pub mod config;
pub mod linalg;
pub mod linesearch;
pub mod model_stepsize;
pub mod problems;
pub mod solver;

pub use config::SolverConfig;
pub use problems::Problem;
pub use solver::{solve, solve_bb, SolverReport, Status};
