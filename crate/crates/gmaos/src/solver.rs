//! Main gradient-descent driver and the plain-BB baseline.
//!
//! Iteration layout: check the gradient stopping test, pick an initial
//! stepsize (four-case rule at the first iteration, model dispatch after),
//! run the nonmonotone line search, update the running reference `C`/`Q`,
//! and step `x <- x - alpha * g`.

use std::time::Instant;

use crate::config::SolverConfig;
use crate::linalg::{all_finite, norm, norm_inf, norm_sq};
use crate::linesearch::{self, NonmonotoneState};
use crate::model_stepsize::{
    self, Branch, IterateMemory, StepsizeDecision, StepsizeError,
};
use crate::problems::Problem;

/// Why the run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Converged,
    IterLimit,
    FevalLimit,
    LineSearchFail,
    NumericalError,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::IterLimit => "iter_limit",
            Status::FevalLimit => "feval_limit",
            Status::LineSearchFail => "line_search_fail",
            Status::NumericalError => "numerical_error",
        }
    }
}

/// How often each stepsize branch fired.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchCounts {
    pub conic: usize,
    pub quadratic_bfgs: usize,
    pub fallback_fd: usize,
    pub fallback_bb_like: usize,
    pub fallback_scaled: usize,
    pub initial: usize,
}

impl BranchCounts {
    pub fn record(&mut self, branch: Branch) {
        match branch {
            Branch::Conic => self.conic += 1,
            Branch::QuadraticBfgs => self.quadratic_bfgs += 1,
            Branch::FallbackFd => self.fallback_fd += 1,
            Branch::FallbackBbLike => self.fallback_bb_like += 1,
            Branch::FallbackScaled => self.fallback_scaled += 1,
            Branch::Initial => self.initial += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.conic
            + self.quadratic_bfgs
            + self.fallback_fd
            + self.fallback_bb_like
            + self.fallback_scaled
            + self.initial
    }
}

/// One logged iteration, kept when `collect_trace` is set.
#[derive(Clone, Debug)]
pub struct TraceRow {
    pub k: usize,
    pub f: f64,
    pub gnorm_inf: f64,
    pub alpha: f64,
    pub branch: Branch,
    pub c: f64,
    pub q: f64,
    /// Reference value `C_k` the acceptance test was run against.
    pub c_ref: f64,
    /// Squared gradient norm at the iterate the step left from.
    pub gnorm2: f64,
    /// `s'y` of the history pair the stepsize was derived from.
    pub s_dot_y: Option<f64>,
    pub nf: usize,
    pub ng: usize,
    /// Quadratic-closeness measure at this iteration, when defined.
    pub mu: Option<f64>,
}

/// Final state and counters of a run.
#[derive(Clone, Debug)]
pub struct SolverReport {
    pub status: Status,
    pub n_iter: usize,
    pub n_feval: usize,
    pub n_geval: usize,
    pub final_gnorm_inf: f64,
    pub final_f: f64,
    pub final_x: Vec<f64>,
    pub wall_time_seconds: f64,
    pub branch_histogram: BranchCounts,
    pub trace: Option<Vec<TraceRow>>,
}

/// Four-case initial stepsize for the first iteration.
pub fn initial_stepsize(x0: &[f64], f0: f64, g0: &[f64]) -> f64 {
    let x_inf = norm_inf(x0);
    let g_inf = norm_inf(g0);
    if x_inf <= 1e-30 {
        if f0.abs() <= 1e-30 {
            1.0
        } else {
            2.0 * f0.abs() / norm(g0)
        }
    } else if g_inf < 1e7 {
        (x_inf / g_inf).min(1.0)
    } else {
        (x_inf.max(1.0) / g_inf).min(1.0)
    }
}

/// Routes one iteration to the conic, quadratic or fallback stepsize, then
/// applies the lambda clamp.
///
/// The conic model is attempted only when the segment does not look
/// quadratic; failing any of its availability conditions falls through to
/// the quadratic model (`s'y > 0`) or the fallbacks (`s'y <= 0`).
pub fn dispatch_stepsize(
    x_cur: &[f64],
    g_cur: &[f64],
    f_cur: f64,
    m: &IterateMemory,
    cfg: &SolverConfig,
    grad_probe: &mut dyn FnMut(&[f64]) -> Vec<f64>,
) -> Result<StepsizeDecision, StepsizeError> {
    let mu = model_stepsize::compute_mu(m.f_prev, f_cur, g_cur, &m.s_prev, &m.y_prev);
    let looks_quadratic = match mu {
        Some(mu) => model_stepsize::quadratic_like(mu, m.mu_prev, cfg.c1, cfg.c2),
        None => false,
    };

    let mut decision = None;
    if !looks_quadratic {
        if let Some(p) = model_stepsize::conic_params(m.f_prev, f_cur, &m.g_prev, g_cur, &m.s_prev)
        {
            decision = model_stepsize::conic_stepsize(g_cur, &p, cfg.xi1, &m.s_prev, &m.y_prev);
        }
    }
    let mut decision = match decision {
        Some(d) => d,
        None => {
            let sty = crate::linalg::dot(&m.s_prev, &m.y_prev);
            if sty > 0.0 {
                model_stepsize::quadratic_stepsize(g_cur, m, f_cur, cfg.xi2, cfg.eta_bar)?
            } else {
                model_stepsize::fallback_stepsize(
                    x_cur,
                    g_cur,
                    m,
                    grad_probe,
                    cfg.tau(m.alpha_prev),
                    cfg.xi3,
                    cfg.delta,
                )?
            }
        }
    };
    decision.alpha = decision.alpha.clamp(cfg.lambda_min, cfg.lambda_max);
    decision.mu = mu;
    Ok(decision)
}

/// Runs the conic/quadratic-model gradient method from `x0`.
pub fn solve(problem: &Problem, x0: &[f64], cfg: &SolverConfig) -> SolverReport {
    run(problem, x0, cfg, Strategy::ModelDispatch)
}

/// Baseline: first BB ratio with the same line search; previous-stepsize
/// scaling when `s'y <= 0`.
pub fn solve_bb(problem: &Problem, x0: &[f64], cfg: &SolverConfig) -> SolverReport {
    run(problem, x0, cfg, Strategy::BarzilaiBorwein)
}

enum Strategy {
    ModelDispatch,
    BarzilaiBorwein,
}

fn run(problem: &Problem, x0: &[f64], cfg: &SolverConfig, strategy: Strategy) -> SolverReport {
    assert_eq!(x0.len(), problem.dim(), "starting point dimension mismatch");
    let start_time = Instant::now();
    let mut n_feval = 0usize;
    let mut n_geval = 0usize;
    let mut histogram = BranchCounts::default();
    let mut trace: Option<Vec<TraceRow>> = cfg.collect_trace.then(Vec::new);

    let mut x = x0.to_vec();
    let mut f = problem.f(&x);
    n_feval += 1;
    let mut g = problem.gradient(&x);
    n_geval += 1;

    let eta = cfg.eta_max;
    let mut state = NonmonotoneState::new(f, eta);
    let mut memory: Option<IterateMemory> = None;
    let mut k = 0usize;

    let report = |status: Status,
                  k: usize,
                  f: f64,
                  g: &[f64],
                  x: Vec<f64>,
                  n_feval: usize,
                  n_geval: usize,
                  histogram: BranchCounts,
                  trace: Option<Vec<TraceRow>>,
                  t0: Instant| SolverReport {
        status,
        n_iter: k,
        n_feval,
        n_geval,
        final_gnorm_inf: norm_inf(g),
        final_f: f,
        final_x: x,
        wall_time_seconds: t0.elapsed().as_secs_f64(),
        branch_histogram: histogram,
        trace,
    };

    if !f.is_finite() || !all_finite(&g) {
        return report(Status::NumericalError, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
    }

    loop {
        if norm_inf(&g) <= cfg.epsilon {
            return report(Status::Converged, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
        }
        if k >= cfg.max_iter {
            return report(Status::IterLimit, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
        }
        if n_feval >= cfg.max_feval {
            return report(Status::FevalLimit, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
        }

        let decision = match &memory {
            None => StepsizeDecision {
                branch: Branch::Initial,
                alpha_raw: initial_stepsize(&x, f, &g),
                alpha: initial_stepsize(&x, f, &g),
                mu: None,
                extra_gradient_evals: 0,
            },
            Some(m) => {
                let mut probe_evals = 0usize;
                let result = match strategy {
                    Strategy::ModelDispatch => {
                        let mut probe = |p: &[f64]| {
                            probe_evals += 1;
                            problem.gradient(p)
                        };
                        dispatch_stepsize(&x, &g, f, m, cfg, &mut probe)
                    }
                    Strategy::BarzilaiBorwein => Ok(bb_decision(m, cfg)),
                };
                n_geval += probe_evals;
                match result {
                    Ok(d) => d,
                    Err(StepsizeError::NonFiniteProbe) => {
                        return report(Status::NumericalError, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
                    }
                    Err(StepsizeError::DegenerateStep) => {
                        return report(Status::NumericalError, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
                    }
                }
            }
        };

        let mut feval_counter = 0usize;
        let outcome = {
            let mut f_oracle = |p: &[f64]| {
                feval_counter += 1;
                problem.f(p)
            };
            linesearch::search(
                &mut f_oracle,
                &x,
                f,
                &g,
                decision.alpha,
                &state,
                cfg.sigma,
                cfg.max_backtracks,
            )
        };
        n_feval += feval_counter;
        let outcome = match outcome {
            Ok(o) => o,
            Err(_) => {
                return report(Status::LineSearchFail, k, f, &g, x, n_feval, n_geval, histogram, trace, start_time);
            }
        };

        let f_new = outcome.f_trial;
        let x_new = outcome.x_trial;
        if f_new < -1e30 {
            // Unbounded descent; the objective is not bounded below here.
            return report(Status::NumericalError, k, f_new, &g, x_new, n_feval, n_geval, histogram, trace, start_time);
        }
        let g_new = problem.gradient(&x_new);
        n_geval += 1;
        if !all_finite(&g_new) {
            return report(Status::NumericalError, k, f_new, &g_new, x_new, n_feval, n_geval, histogram, trace, start_time);
        }

        histogram.record(decision.branch);
        let c_ref = state.c;
        state = linesearch::update_cq(state, f_new);
        if let Some(rows) = trace.as_mut() {
            rows.push(TraceRow {
                k,
                f: f_new,
                gnorm_inf: norm_inf(&g_new),
                alpha: outcome.alpha_accepted,
                branch: decision.branch,
                c: state.c,
                q: state.q,
                c_ref,
                gnorm2: norm_sq(&g),
                s_dot_y: memory
                    .as_ref()
                    .map(|m| crate::linalg::dot(&m.s_prev, &m.y_prev)),
                nf: n_feval,
                ng: n_geval,
                mu: decision.mu,
            });
        }

        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        memory = Some(IterateMemory {
            s_prev: s,
            y_prev: y,
            f_prev: f,
            g_prev: std::mem::replace(&mut g, g_new),
            alpha_prev: outcome.alpha_accepted,
            mu_prev: decision.mu,
        });
        x = x_new;
        f = f_new;
        k += 1;
    }
}

fn bb_decision(m: &IterateMemory, cfg: &SolverConfig) -> StepsizeDecision {
    let sty = crate::linalg::dot(&m.s_prev, &m.y_prev);
    let (branch, alpha_raw) = if sty > 0.0 {
        (Branch::QuadraticBfgs, norm_sq(&m.s_prev) / sty)
    } else {
        (Branch::FallbackScaled, cfg.delta * m.alpha_prev)
    };
    StepsizeDecision {
        branch,
        alpha_raw,
        alpha: alpha_raw.clamp(cfg.lambda_min, cfg.lambda_max),
        mu: None,
        extra_gradient_evals: 0,
    }
}
