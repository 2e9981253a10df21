//! Zhang-Hager nonmonotone line search.
//!
//! Acceptance is tested against a weighted running average `C_k` of past
//! function values rather than the latest value. Rejected trials are shrunk
//! by safeguarded quadratic interpolation.

use thiserror::Error;

use crate::linalg::axpy;

/// Running nonmonotone reference: `C` (reference value), `Q` (reference
/// weight) and the averaging parameter `eta`.
#[derive(Clone, Copy, Debug)]
pub struct NonmonotoneState {
    pub c: f64,
    pub q: f64,
    pub eta: f64,
}

impl NonmonotoneState {
    /// Initial state: `Q_0 = 1`, `C_0 = f_0`.
    pub fn new(f0: f64, eta: f64) -> Self {
        NonmonotoneState { c: f0, q: 1.0, eta }
    }
}

/// Result of an accepted search: the stepsize, the trial value, and counts.
#[derive(Clone, Debug)]
pub struct LineSearchOutcome {
    pub alpha_accepted: f64,
    pub f_trial: f64,
    pub x_trial: Vec<f64>,
    pub n_backtracks: usize,
    pub n_feval: usize,
}

#[derive(Debug, Error)]
pub enum LineSearchError {
    #[error("no acceptable stepsize within {max_backtracks} backtracks (best alpha {best_alpha:.3e})")]
    MaxBacktracks { max_backtracks: usize, best_alpha: f64 },
    #[error("stepsize underflow below 1e-30 (best alpha {best_alpha:.3e})")]
    AlphaUnderflow { best_alpha: f64 },
}

/// Acceptance test `f_trial <= C - sigma * alpha * |g|^2`. Non-finite trial
/// values are rejected.
pub fn accept(f_trial: f64, c: f64, sigma: f64, alpha: f64, gnorm2: f64) -> bool {
    f_trial.is_finite() && f_trial <= c - sigma * alpha * gnorm2
}

/// Minimizer of the quadratic through `(0, f0)` with slope `-gnorm2` and
/// `(alpha, f_trial)`. `None` when the data admit no convex interpolant.
pub fn interp_trial(f0: f64, gnorm2: f64, alpha: f64, f_trial: f64) -> Option<f64> {
    let denom = 2.0 * (f_trial - f0 + alpha * gnorm2);
    (denom > 0.0).then(|| gnorm2 * alpha * alpha / denom)
}

/// Safeguarded shrink: use the interpolated trial when it lies inside
/// `[0.1 alpha0, 0.9 alpha]` and `alpha` has not collapsed, else halve.
pub fn backtrack(alpha: f64, alpha0: f64, trial: Option<f64>) -> f64 {
    match trial {
        Some(t) if alpha > 0.1 * alpha0 && t >= 0.1 * alpha0 && t <= 0.9 * alpha => t,
        _ => 0.5 * alpha,
    }
}

/// One application of the `Q`/`C` recurrence after accepting `f_new`:
/// `Q' = eta Q + 1`, `C' = (eta Q C + f_new) / Q'`.
pub fn update_cq(state: NonmonotoneState, f_new: f64) -> NonmonotoneState {
    let q_next = state.eta * state.q + 1.0;
    NonmonotoneState {
        c: (state.eta * state.q * state.c + f_new) / q_next,
        q: q_next,
        eta: state.eta,
    }
}

/// Runs the search along `-g` from `x`, starting at `alpha0`, until the
/// acceptance inequality holds.
pub fn search(
    f: &mut dyn FnMut(&[f64]) -> f64,
    x: &[f64],
    f0: f64,
    g: &[f64],
    alpha0: f64,
    state: &NonmonotoneState,
    sigma: f64,
    max_backtracks: usize,
) -> Result<LineSearchOutcome, LineSearchError> {
    let gnorm2: f64 = g.iter().map(|gi| gi * gi).sum();
    let mut alpha = alpha0;
    let mut n_feval = 0;
    for backtracks in 0..=max_backtracks {
        let x_trial = axpy(x, -alpha, g);
        let f_trial = f(&x_trial);
        n_feval += 1;
        if accept(f_trial, state.c, sigma, alpha, gnorm2) {
            return Ok(LineSearchOutcome {
                alpha_accepted: alpha,
                f_trial,
                x_trial,
                n_backtracks: backtracks,
                n_feval,
            });
        }
        let trial = if f_trial.is_finite() {
            interp_trial(f0, gnorm2, alpha, f_trial)
        } else {
            None
        };
        alpha = backtrack(alpha, alpha0, trial);
        if alpha < 1e-30 {
            return Err(LineSearchError::AlphaUnderflow { best_alpha: alpha });
        }
    }
    Err(LineSearchError::MaxBacktracks { max_backtracks, best_alpha: alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn accept_direct_and_boundary() {
        assert!(accept(0.9, 1.0, 1e-4, 1.0, 1.0));
        assert!(!accept(1.0, 1.0, 1e-4, 1.0, 1.0));
        assert!(!accept(f64::NAN, 1.0, 1e-4, 1.0, 1.0));
        assert!(!accept(f64::INFINITY, 1.0, 1e-4, 1.0, 1.0));
    }

    #[test]
    fn interpolation_cases() {
        // No decrease: symmetric interpolant at alpha/2.
        assert_eq!(interp_trial(1.0, 1.0, 1.0, 1.0), Some(0.5));
        // Exact quadratic with minimum at 1.
        assert_eq!(interp_trial(1.0, 1.0, 1.0, 0.5), Some(1.0));
        // Concave data: no interpolant.
        assert_eq!(interp_trial(1.0, 1.0, 1.0, -0.05 - 1.0 + 1.0 - 0.05), None);
        assert!(interp_trial(1.0, 1.0, 1.0, -0.1).is_none());
    }

    #[test]
    fn backtrack_safeguards() {
        assert_eq!(backtrack(1.0, 1.0, Some(0.5)), 0.5);
        assert_eq!(backtrack(1.0, 1.0, Some(0.05)), 0.5);
        assert_eq!(backtrack(0.05, 1.0, Some(0.04)), 0.025);
        assert_eq!(backtrack(1.0, 1.0, None), 0.5);
    }

    #[test]
    fn update_cq_examples() {
        let s = NonmonotoneState { c: 10.0, q: 1.0, eta: 1.0 };
        let s2 = update_cq(s, 2.0);
        assert_eq!(s2.q, 2.0);
        assert_eq!(s2.c, 6.0);

        // eta = 0 recovers monotone Armijo.
        let s = NonmonotoneState { c: 10.0, q: 1.0, eta: 0.0 };
        let s2 = update_cq(s, 2.0);
        assert_eq!(s2.q, 1.0);
        assert_eq!(s2.c, 2.0);

        // Running average of (3, 1, 2).
        let mut s = NonmonotoneState::new(3.0, 1.0);
        s = update_cq(s, 1.0);
        s = update_cq(s, 2.0);
        assert_eq!(s.c, 2.0);
    }

    #[test]
    fn search_accepts_cauchy_step_on_quadratic() {
        let mut f = |x: &[f64]| 0.5 * x.iter().map(|xi| xi * xi).sum::<f64>();
        let state = NonmonotoneState::new(0.5, 1.0);
        let out = search(&mut f, &[1.0, 0.0], 0.5, &[1.0, 0.0], 1.0, &state, 1e-4, 60).unwrap();
        assert_eq!(out.n_backtracks, 0);
        assert_eq!(out.alpha_accepted, 1.0);
        assert_eq!(out.f_trial, 0.0);
    }

    #[test]
    fn search_backtracks_from_huge_step() {
        let mut f = |x: &[f64]| 0.5 * x.iter().map(|xi| xi * xi).sum::<f64>();
        let state = NonmonotoneState::new(0.5, 1.0);
        let out = search(&mut f, &[1.0, 0.0], 0.5, &[1.0, 0.0], 1e6, &state, 1e-4, 60).unwrap();
        assert!(out.n_backtracks >= 1);
        // Acceptance inequality holds at exit.
        assert!(out.f_trial <= state.c - 1e-4 * out.alpha_accepted * 1.0);
    }

    #[test]
    fn search_fails_on_infinite_objective() {
        let mut f = |_: &[f64]| f64::INFINITY;
        let state = NonmonotoneState::new(0.5, 1.0);
        let err = search(&mut f, &[1.0], 0.5, &[1.0], 1.0, &state, 1e-4, 20).unwrap_err();
        assert!(matches!(err, LineSearchError::MaxBacktracks { .. }));
    }

    proptest! {
        #[test]
        fn backtrack_strictly_shrinks(
            alpha in 1e-12f64..1e6,
            alpha0 in 1e-12f64..1e6,
            trial in proptest::option::of(0.0f64..1e6),
        ) {
            let next = backtrack(alpha, alpha0, trial);
            prop_assert!(next > 0.0);
            prop_assert!(next <= 0.9 * alpha);
        }

        #[test]
        fn cq_update_is_convex_combination(
            c in -100.0f64..100.0,
            q in 1.0f64..50.0,
            eta in 0.0f64..1.0,
            f_new in -100.0f64..100.0,
        ) {
            let s = update_cq(NonmonotoneState { c, q, eta }, f_new);
            prop_assert!(s.q >= 1.0);
            let lo = c.min(f_new) - 1e-9;
            let hi = c.max(f_new) + 1e-9;
            prop_assert!(s.c >= lo && s.c <= hi);
        }

        #[test]
        fn cq_mean_property(fs in proptest::collection::vec(-50.0f64..50.0, 2..30)) {
            let mut s = NonmonotoneState::new(fs[0], 1.0);
            for &fi in &fs[1..] {
                s = update_cq(s, fi);
            }
            let mean = fs.iter().sum::<f64>() / fs.len() as f64;
            prop_assert!((s.c - mean).abs() <= 1e-12 * (1.0 + mean.abs()));
        }
    }
}
