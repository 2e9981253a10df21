//! Benchmark matrix and Dolan-More performance profiles.
//!
//! Each (solver, problem) pair produces one [`BenchmarkRecord`]; profiles
//! report, for every solver, the fraction of problems it solves within a
//! factor `tau` of the best solver's cost.

use std::io::Write;
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SolverConfig;
use crate::problems::Problem;
use crate::solver::{self, SolverReport, Status};

/// Which solver a record belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Gmaos,
    Bb,
}

impl SolverKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolverKind::Gmaos => "gmaos",
            SolverKind::Bb => "bb",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "gmaos" => Some(SolverKind::Gmaos),
            "bb" => Some(SolverKind::Bb),
            _ => None,
        }
    }

    pub fn run(&self, problem: &Problem, x0: &[f64], cfg: &SolverConfig) -> SolverReport {
        match self {
            SolverKind::Gmaos => solver::solve(problem, x0, cfg),
            SolverKind::Bb => solver::solve_bb(problem, x0, cfg),
        }
    }
}

/// One (solver, problem) outcome.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub solver: String,
    pub problem: String,
    pub dim: usize,
    pub status: String,
    pub n_iter: usize,
    pub n_feval: usize,
    pub n_geval: usize,
    /// `n_feval + 3 * n_geval`.
    pub combined_cost: usize,
    pub wall_time_seconds: f64,
    pub final_f: f64,
    pub final_gnorm_inf: f64,
    pub seed: u64,
}

impl BenchmarkRecord {
    pub fn converged(&self) -> bool {
        self.status == Status::Converged.as_str()
    }
}

/// Cost metric a profile is computed over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    Iterations,
    FunctionEvals,
    GradientEvals,
    CombinedCost,
    WallTime,
}

impl Metric {
    pub fn as_str(&self) -> &'static str {
        match self {
            Metric::Iterations => "n_iter",
            Metric::FunctionEvals => "n_feval",
            Metric::GradientEvals => "n_geval",
            Metric::CombinedCost => "n_feval_plus_3_n_geval",
            Metric::WallTime => "wall_time_seconds",
        }
    }

    pub const ALL: [Metric; 5] = [
        Metric::Iterations,
        Metric::FunctionEvals,
        Metric::GradientEvals,
        Metric::CombinedCost,
        Metric::WallTime,
    ];

    fn cost(&self, r: &BenchmarkRecord) -> f64 {
        match self {
            Metric::Iterations => r.n_iter as f64,
            Metric::FunctionEvals => r.n_feval as f64,
            Metric::GradientEvals => r.n_geval as f64,
            Metric::CombinedCost => r.combined_cost as f64,
            Metric::WallTime => r.wall_time_seconds,
        }
    }
}

/// One solver's profile curve over a `tau` grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub solver: String,
    pub metric: String,
    /// Hardware-dependent metrics (wall time) are flagged here.
    pub informational: bool,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("i/o error writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Runs every (solver, problem) pair on a bounded worker pool. Failures are
/// recorded, never dropped; a panicking run is caught and reported as a
/// numerical error.
pub fn run_matrix(
    solvers: &[SolverKind],
    problems: &[Problem],
    cfg: &SolverConfig,
    workers: usize,
) -> Vec<BenchmarkRecord> {
    assert!(!solvers.is_empty() && !problems.is_empty());
    let pairs: Vec<(SolverKind, &Problem)> = solvers
        .iter()
        .flat_map(|s| problems.iter().map(move |p| (*s, p)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool");
    pool.install(|| {
        use rayon::prelude::*;
        pairs
            .par_iter()
            .map(|(kind, problem)| run_pair(*kind, problem, cfg))
            .collect()
    })
}

fn run_pair(kind: SolverKind, problem: &Problem, cfg: &SolverConfig) -> BenchmarkRecord {
    let x0 = problem.default_start();
    let outcome = panic::catch_unwind(AssertUnwindSafe(|| kind.run(problem, &x0, cfg)));
    match outcome {
        Ok(report) => BenchmarkRecord {
            solver: kind.as_str().to_string(),
            problem: problem.name().to_string(),
            dim: problem.dim(),
            status: report.status.as_str().to_string(),
            n_iter: report.n_iter,
            n_feval: report.n_feval,
            n_geval: report.n_geval,
            combined_cost: report.n_feval + 3 * report.n_geval,
            wall_time_seconds: report.wall_time_seconds,
            final_f: report.final_f,
            final_gnorm_inf: report.final_gnorm_inf,
            seed: cfg.seed,
        },
        Err(_) => BenchmarkRecord {
            solver: kind.as_str().to_string(),
            problem: problem.name().to_string(),
            dim: problem.dim(),
            status: Status::NumericalError.as_str().to_string(),
            n_iter: 0,
            n_feval: 0,
            n_geval: 0,
            combined_cost: 0,
            wall_time_seconds: 0.0,
            final_f: f64::NAN,
            final_gnorm_inf: f64::NAN,
            seed: cfg.seed,
        },
    }
}

/// Dolan-More profile from raw per-(solver, problem) costs. `None` marks an
/// unsolved pair (infinite cost). Problems unsolved by every solver are
/// excluded from the problem count with a warning on stderr.
///
/// The `tau` grid is 200 log-spaced points merged with every observed
/// ratio, so the curves are exact step functions.
pub fn profile_from_costs(
    solvers: &[String],
    problems: &[String],
    costs: &[Vec<Option<f64>>], // indexed [solver][problem]
    metric: &str,
    informational: bool,
) -> Vec<ProfileCurve> {
    assert!(solvers.len() >= 2, "profiles need at least two solvers");
    assert!(costs.len() == solvers.len());
    assert!(costs.iter().all(|row| row.len() == problems.len()));

    // Per-problem best cost; drop problems nobody solved.
    let mut kept: Vec<usize> = Vec::new();
    let mut best: Vec<f64> = Vec::new();
    for j in 0..problems.len() {
        let b = costs
            .iter()
            .filter_map(|row| row[j])
            .fold(f64::INFINITY, f64::min);
        if b.is_finite() {
            kept.push(j);
            best.push(b);
        } else {
            eprintln!(
                "warning: problem `{}` unsolved by all solvers; excluded from profile",
                problems[j]
            );
        }
    }
    let n_kept = kept.len();

    // Observed ratios per solver per kept problem.
    let ratios: Vec<Vec<f64>> = costs
        .iter()
        .map(|row| {
            kept.iter()
                .zip(&best)
                .map(|(&j, &b)| match row[j] {
                    Some(c) if b > 0.0 => c / b,
                    Some(c) if c == b => 1.0, // both zero cost
                    _ => f64::INFINITY,
                })
                .collect()
        })
        .collect();

    let max_ratio = ratios
        .iter()
        .flatten()
        .filter(|r| r.is_finite())
        .fold(1.0f64, |m, &r| m.max(r));

    let mut grid: Vec<f64> = (0..200)
        .map(|i| (max_ratio.max(1.0 + 1e-12).ln() * i as f64 / 199.0).exp())
        .collect();
    grid.extend(ratios.iter().flatten().filter(|r| r.is_finite()));
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid.dedup();

    solvers
        .iter()
        .zip(&ratios)
        .map(|(name, rs)| {
            let points = grid
                .iter()
                .map(|&tau| {
                    let solved = rs.iter().filter(|&&r| r <= tau).count();
                    (tau, solved as f64 / n_kept as f64)
                })
                .collect();
            ProfileCurve {
                solver: name.clone(),
                metric: metric.to_string(),
                informational,
                points,
            }
        })
        .collect()
}

/// Profile curves for one metric from benchmark records. Non-converged pairs
/// get infinite cost.
pub fn performance_profile(records: &[BenchmarkRecord], metric: Metric) -> Vec<ProfileCurve> {
    let mut solvers: Vec<String> = Vec::new();
    let mut problems: Vec<String> = Vec::new();
    for r in records {
        if !solvers.contains(&r.solver) {
            solvers.push(r.solver.clone());
        }
        if !problems.contains(&r.problem) {
            problems.push(r.problem.clone());
        }
    }
    let mut costs = vec![vec![None; problems.len()]; solvers.len()];
    for r in records {
        let i = solvers.iter().position(|s| *s == r.solver).unwrap();
        let j = problems.iter().position(|p| *p == r.problem).unwrap();
        if r.converged() {
            costs[i][j] = Some(metric.cost(r));
        }
    }
    profile_from_costs(
        &solvers,
        &problems,
        &costs,
        metric.as_str(),
        metric == Metric::WallTime,
    )
}

const CSV_HEADER: &str = "solver,problem,dim,status,n_iter,n_feval,n_geval,combined_cost,wall_time_seconds,final_f,final_gnorm_inf,seed";

/// Writes records as CSV, columns in declared field order.
pub fn write_records_csv(path: &Path, records: &[BenchmarkRecord]) -> Result<(), BenchError> {
    let io_err = |source| BenchError::Io { path: path.display().to_string(), source };
    let mut file = std::fs::File::create(path).map_err(io_err)?;
    let io_err = |source| BenchError::Io { path: path.display().to_string(), source };
    writeln!(file, "{CSV_HEADER}").map_err(io_err)?;
    let io_err = |source| BenchError::Io { path: path.display().to_string(), source };
    for r in records {
        writeln!(
            file,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.solver,
            r.problem,
            r.dim,
            r.status,
            r.n_iter,
            r.n_feval,
            r.n_geval,
            r.combined_cost,
            r.wall_time_seconds,
            r.final_f,
            r.final_gnorm_inf,
            r.seed
        )
        .map_err(io_err)?;
    }
    Ok(())
}

/// Writes profile curves for all metrics as a JSON list.
pub fn write_profiles_json(path: &Path, curves: &[ProfileCurve]) -> Result<(), BenchError> {
    let text = serde_json::to_string_pretty(curves)?;
    std::fs::write(path, text).map_err(|source| BenchError::Io {
        path: path.display().to_string(),
        source,
    })
}
