//! Smooth unconstrained test functions with analytic gradients.
//!
//! The collection follows the standard Andrei test-function formulas, each
//! with its literature-default starting point. Dimensions are configurable;
//! functions with block structure only accept compatible dimensions.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

type EvalF = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type EvalG = Arc<dyn Fn(&[f64], &mut [f64]) + Send + Sync>;
type Start = Arc<dyn Fn(&mut [f64]) + Send + Sync>;

/// An evaluable smooth objective: value, gradient, dimension and default
/// starting point. Immutable after construction and safe to share across
/// threads.
#[derive(Clone)]
pub struct Problem {
    name: String,
    dim: usize,
    eval_f: EvalF,
    eval_g: EvalG,
    start: Start,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .finish()
    }
}

impl Problem {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        eval_f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
        eval_g: impl Fn(&[f64], &mut [f64]) + Send + Sync + 'static,
        start: impl Fn(&mut [f64]) + Send + Sync + 'static,
    ) -> Self {
        Problem {
            name: name.into(),
            dim,
            eval_f: Arc::new(eval_f),
            eval_g: Arc::new(eval_g),
            start: Arc::new(start),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn f(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        (self.eval_f)(x)
    }

    pub fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(out.len(), self.dim);
        (self.eval_g)(x, out);
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.dim];
        self.gradient_into(x, &mut g);
        g
    }

    pub fn default_start(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.dim];
        (self.start)(&mut x);
        x
    }
}

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("unknown problem `{name}`; valid names: {valid}")]
    UnknownName { name: String, valid: String },
    #[error("problem `{name}` needs dimension that is a multiple of {block} and at least {min_dim}, got {dim}")]
    IncompatibleDim {
        name: String,
        dim: usize,
        block: usize,
        min_dim: usize,
    },
}

/// Gradient-check failure: a non-finite value was met while differencing.
#[derive(Debug, Error)]
#[error("non-finite {what} at component {index} during gradient check")]
pub struct GradientCheckError {
    pub what: &'static str,
    pub index: usize,
}

struct Spec {
    name: &'static str,
    block: usize,
    min_dim: usize,
    build: fn(usize) -> Problem,
}

const SPECS: &[Spec] = &[
    Spec { name: "quadratic", block: 1, min_dim: 1, build: quadratic },
    Spec { name: "ext_rosenbrock", block: 2, min_dim: 2, build: ext_rosenbrock },
    Spec { name: "ext_white_holst", block: 2, min_dim: 2, build: ext_white_holst },
    Spec { name: "ext_beale", block: 2, min_dim: 2, build: ext_beale },
    Spec { name: "ext_penalty", block: 1, min_dim: 2, build: ext_penalty },
    Spec { name: "perturbed_quadratic", block: 1, min_dim: 1, build: perturbed_quadratic },
    Spec { name: "raydan1", block: 1, min_dim: 1, build: raydan1 },
    Spec { name: "raydan2", block: 1, min_dim: 1, build: raydan2 },
    Spec { name: "diagonal1", block: 1, min_dim: 1, build: diagonal1 },
    Spec { name: "gen_tridiag1", block: 1, min_dim: 2, build: gen_tridiag1 },
    Spec { name: "edensch", block: 1, min_dim: 2, build: edensch },
    Spec { name: "engval1", block: 1, min_dim: 2, build: engval1 },
    Spec { name: "fletchcr", block: 1, min_dim: 2, build: fletchcr },
    Spec { name: "dixmaana", block: 3, min_dim: 3, build: dixmaana },
];

/// Names of every registered function, in registry order.
pub fn names() -> Vec<&'static str> {
    SPECS.iter().map(|s| s.name).collect()
}

/// Builds the named problem at an exact dimension, rejecting dimensions that
/// do not fit the function's block structure.
pub fn by_name(name: &str, dim: usize) -> Result<Problem, ProblemError> {
    let spec = SPECS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| ProblemError::UnknownName {
            name: name.to_string(),
            valid: names().join(", "),
        })?;
    if dim < spec.min_dim || dim % spec.block != 0 {
        return Err(ProblemError::IncompatibleDim {
            name: name.to_string(),
            dim,
            block: spec.block,
            min_dim: spec.min_dim,
        });
    }
    Ok((spec.build)(dim))
}

/// The full collection at a requested dimension. Functions with block
/// structure are built at the largest compatible dimension not exceeding
/// `n` (e.g. a 3-block function at `n = 1000` gets dimension 999).
pub fn registry(n: usize) -> Vec<Problem> {
    SPECS
        .iter()
        .map(|s| {
            let mut d = n.max(s.min_dim);
            d -= d % s.block;
            d = d.max(s.min_dim);
            (s.build)(d)
        })
        .collect()
}

/// Strictly convex diagonal quadratic `f = 1/2 sum(lambda_i x_i^2)` with
/// eigenvalues log-spaced in `[1, cond]`. Used as a conditioning fixture.
pub fn diag_quadratic(n: usize, cond: f64) -> Problem {
    assert!(n >= 1 && cond >= 1.0);
    let lambda: Arc<Vec<f64>> = Arc::new(
        (0..n)
            .map(|i| {
                if n == 1 {
                    1.0
                } else {
                    cond.powf(i as f64 / (n - 1) as f64)
                }
            })
            .collect(),
    );
    let lf = lambda.clone();
    let lg = lambda.clone();
    Problem::new(
        "diag_quadratic",
        n,
        move |x| 0.5 * x.iter().zip(lf.iter()).map(|(xi, li)| li * xi * xi).sum::<f64>(),
        move |x, g| {
            for i in 0..x.len() {
                g[i] = lg[i] * x[i];
            }
        },
        |x| x.fill(1.0),
    )
}

/// Max relative component error between analytic and central-difference
/// gradients:
/// `max_i |(f(x + h_i e_i) - f(x - h_i e_i)) / (2 h_i) - g_i| / (1 + |g_i|)`.
///
/// `h` is the base step, scaled per coordinate by `1 + |x_i|`. When absent it
/// defaults to `1e-6` with a floor of `cbrt(eps * (1 + |f(x)|))`, which keeps
/// cancellation error under control when `|f|` is very large.
pub fn check_gradient(p: &Problem, x: &[f64], h: Option<f64>) -> Result<f64, GradientCheckError> {
    let f0 = p.f(x);
    if !f0.is_finite() {
        return Err(GradientCheckError { what: "objective", index: 0 });
    }
    let floor = (f64::EPSILON * (1.0 + f0.abs())).cbrt();
    let base = h.unwrap_or(1e-6);
    let g = p.gradient(x);
    let mut xp = x.to_vec();
    let mut worst = 0.0f64;
    for i in 0..x.len() {
        if !g[i].is_finite() {
            return Err(GradientCheckError { what: "gradient", index: i });
        }
        let hi = (base * (1.0 + x[i].abs())).max(if h.is_none() { floor } else { 0.0 });
        xp[i] = x[i] + hi;
        let fp = p.f(&xp);
        xp[i] = x[i] - hi;
        let fm = p.f(&xp);
        xp[i] = x[i];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(GradientCheckError { what: "objective", index: i });
        }
        let fd = (fp - fm) / (2.0 * hi);
        worst = worst.max((fd - g[i]).abs() / (1.0 + g[i].abs()));
    }
    Ok(worst)
}

// --- function definitions -------------------------------------------------

fn quadratic(n: usize) -> Problem {
    Problem::new(
        "quadratic",
        n,
        |x| 0.5 * x.iter().enumerate().map(|(i, xi)| (i + 1) as f64 * xi * xi).sum::<f64>(),
        |x, g| {
            for (i, xi) in x.iter().enumerate() {
                g[i] = (i + 1) as f64 * xi;
            }
        },
        |x| x.fill(1.0),
    )
}

fn ext_rosenbrock(n: usize) -> Problem {
    Problem::new(
        "ext_rosenbrock",
        n,
        |x| {
            x.chunks_exact(2)
                .map(|c| {
                    let t = c[1] - c[0] * c[0];
                    100.0 * t * t + (1.0 - c[0]) * (1.0 - c[0])
                })
                .sum()
        },
        |x, g| {
            for j in (0..x.len()).step_by(2) {
                let t = x[j + 1] - x[j] * x[j];
                g[j] = -400.0 * t * x[j] - 2.0 * (1.0 - x[j]);
                g[j + 1] = 200.0 * t;
            }
        },
        |x| {
            for j in (0..x.len()).step_by(2) {
                x[j] = -1.2;
                x[j + 1] = 1.0;
            }
        },
    )
}

fn ext_white_holst(n: usize) -> Problem {
    Problem::new(
        "ext_white_holst",
        n,
        |x| {
            x.chunks_exact(2)
                .map(|c| {
                    let t = c[1] - c[0] * c[0] * c[0];
                    100.0 * t * t + (1.0 - c[0]) * (1.0 - c[0])
                })
                .sum()
        },
        |x, g| {
            for j in (0..x.len()).step_by(2) {
                let t = x[j + 1] - x[j] * x[j] * x[j];
                g[j] = -600.0 * t * x[j] * x[j] - 2.0 * (1.0 - x[j]);
                g[j + 1] = 200.0 * t;
            }
        },
        |x| {
            for j in (0..x.len()).step_by(2) {
                x[j] = -1.2;
                x[j + 1] = 1.0;
            }
        },
    )
}

fn ext_beale(n: usize) -> Problem {
    Problem::new(
        "ext_beale",
        n,
        |x| {
            x.chunks_exact(2)
                .map(|c| {
                    let (a, b) = (c[0], c[1]);
                    let u1 = 1.5 - a * (1.0 - b);
                    let u2 = 2.25 - a * (1.0 - b * b);
                    let u3 = 2.625 - a * (1.0 - b * b * b);
                    u1 * u1 + u2 * u2 + u3 * u3
                })
                .sum()
        },
        |x, g| {
            for j in (0..x.len()).step_by(2) {
                let (a, b) = (x[j], x[j + 1]);
                let u1 = 1.5 - a * (1.0 - b);
                let u2 = 2.25 - a * (1.0 - b * b);
                let u3 = 2.625 - a * (1.0 - b * b * b);
                g[j] = -2.0 * u1 * (1.0 - b) - 2.0 * u2 * (1.0 - b * b) - 2.0 * u3 * (1.0 - b * b * b);
                g[j + 1] = 2.0 * u1 * a + 4.0 * u2 * a * b + 6.0 * u3 * a * b * b;
            }
        },
        |x| {
            for j in (0..x.len()).step_by(2) {
                x[j] = 1.0;
                x[j + 1] = 0.8;
            }
        },
    )
}

fn ext_penalty(n: usize) -> Problem {
    Problem::new(
        "ext_penalty",
        n,
        |x| {
            let s: f64 = x.iter().map(|xi| xi * xi).sum();
            let head: f64 = x[..x.len() - 1].iter().map(|xi| (xi - 1.0) * (xi - 1.0)).sum();
            head + (s - 0.25) * (s - 0.25)
        },
        |x, g| {
            let s: f64 = x.iter().map(|xi| xi * xi).sum();
            let c = 4.0 * (s - 0.25);
            let n = x.len();
            for i in 0..n {
                g[i] = c * x[i];
                if i < n - 1 {
                    g[i] += 2.0 * (x[i] - 1.0);
                }
            }
        },
        |x| {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = (i + 1) as f64;
            }
        },
    )
}

fn perturbed_quadratic(n: usize) -> Problem {
    Problem::new(
        "perturbed_quadratic",
        n,
        |x| {
            let s: f64 = x.iter().sum();
            x.iter().enumerate().map(|(i, xi)| (i + 1) as f64 * xi * xi).sum::<f64>() + s * s / 100.0
        },
        |x, g| {
            let s: f64 = x.iter().sum();
            for (i, xi) in x.iter().enumerate() {
                g[i] = 2.0 * (i + 1) as f64 * xi + 2.0 * s / 100.0;
            }
        },
        |x| x.fill(0.5),
    )
}

fn raydan1(n: usize) -> Problem {
    Problem::new(
        "raydan1",
        n,
        |x| {
            x.iter()
                .enumerate()
                .map(|(i, xi)| (i + 1) as f64 / 10.0 * (xi.exp() - xi))
                .sum()
        },
        |x, g| {
            for (i, xi) in x.iter().enumerate() {
                g[i] = (i + 1) as f64 / 10.0 * (xi.exp() - 1.0);
            }
        },
        |x| x.fill(1.0),
    )
}

fn raydan2(n: usize) -> Problem {
    Problem::new(
        "raydan2",
        n,
        |x| x.iter().map(|xi| xi.exp() - xi).sum(),
        |x, g| {
            for (i, xi) in x.iter().enumerate() {
                g[i] = xi.exp() - 1.0;
            }
        },
        |x| x.fill(1.0),
    )
}

fn diagonal1(n: usize) -> Problem {
    Problem::new(
        "diagonal1",
        n,
        |x| {
            x.iter()
                .enumerate()
                .map(|(i, xi)| xi.exp() - (i + 1) as f64 * xi)
                .sum()
        },
        |x, g| {
            for (i, xi) in x.iter().enumerate() {
                g[i] = xi.exp() - (i + 1) as f64;
            }
        },
        |x| {
            let n = x.len() as f64;
            x.fill(1.0 / n);
        },
    )
}

fn gen_tridiag1(n: usize) -> Problem {
    Problem::new(
        "gen_tridiag1",
        n,
        |x| {
            (0..x.len() - 1)
                .map(|i| {
                    let a = x[i] + x[i + 1] - 3.0;
                    let b = x[i] - x[i + 1] + 1.0;
                    a * a + b * b * b * b
                })
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 1 {
                let a = x[i] + x[i + 1] - 3.0;
                let b = x[i] - x[i + 1] + 1.0;
                let b3 = 4.0 * b * b * b;
                g[i] += 2.0 * a + b3;
                g[i + 1] += 2.0 * a - b3;
            }
        },
        |x| x.fill(2.0),
    )
}

fn edensch(n: usize) -> Problem {
    Problem::new(
        "edensch",
        n,
        |x| {
            16.0 + (0..x.len() - 1)
                .map(|i| {
                    let a = x[i] - 2.0;
                    let b = x[i] * x[i + 1] - 2.0 * x[i + 1];
                    let c = x[i + 1] + 1.0;
                    a * a * a * a + b * b + c * c
                })
                .sum::<f64>()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 1 {
                let a = x[i] - 2.0;
                let b = x[i] * x[i + 1] - 2.0 * x[i + 1];
                g[i] += 4.0 * a * a * a + 2.0 * b * x[i + 1];
                g[i + 1] += 2.0 * b * (x[i] - 2.0) + 2.0 * (x[i + 1] + 1.0);
            }
        },
        |x| x.fill(0.0),
    )
}

fn engval1(n: usize) -> Problem {
    Problem::new(
        "engval1",
        n,
        |x| {
            (0..x.len() - 1)
                .map(|i| {
                    let t = x[i] * x[i] + x[i + 1] * x[i + 1];
                    t * t - 4.0 * x[i] + 3.0
                })
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 1 {
                let t = x[i] * x[i] + x[i + 1] * x[i + 1];
                g[i] += 4.0 * t * x[i] - 4.0;
                g[i + 1] += 4.0 * t * x[i + 1];
            }
        },
        |x| x.fill(2.0),
    )
}

fn fletchcr(n: usize) -> Problem {
    Problem::new(
        "fletchcr",
        n,
        |x| {
            (0..x.len() - 1)
                .map(|i| {
                    let t = x[i + 1] - x[i] + 1.0 - x[i] * x[i];
                    100.0 * t * t
                })
                .sum()
        },
        |x, g| {
            g.fill(0.0);
            for i in 0..x.len() - 1 {
                let t = x[i + 1] - x[i] + 1.0 - x[i] * x[i];
                g[i] += 200.0 * t * (-1.0 - 2.0 * x[i]);
                g[i + 1] += 200.0 * t;
            }
        },
        |x| x.fill(0.0),
    )
}

fn dixmaana(n: usize) -> Problem {
    // DIXMAANA coefficients: alpha=1, beta=0, gamma=delta=0.125, all powers 0.
    Problem::new(
        "dixmaana",
        n,
        |x| {
            let n = x.len();
            let m = n / 3;
            let mut f = 1.0;
            for xi in x {
                f += xi * xi;
            }
            for i in 0..2 * m {
                let x4 = x[i + m] * x[i + m];
                f += 0.125 * x[i] * x[i] * x4 * x4;
            }
            for i in 0..m {
                f += 0.125 * x[i] * x[i + 2 * m];
            }
            f
        },
        |x, g| {
            let n = x.len();
            let m = n / 3;
            for i in 0..n {
                g[i] = 2.0 * x[i];
            }
            for i in 0..2 * m {
                let xm = x[i + m];
                let x4 = xm * xm * xm * xm;
                g[i] += 0.25 * x[i] * x4;
                g[i + m] += 0.5 * x[i] * x[i] * xm * xm * xm;
            }
            for i in 0..m {
                g[i] += 0.125 * x[i + 2 * m];
                g[i + 2 * m] += 0.125 * x[i];
            }
        },
        |x| x.fill(2.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rosenbrock_minimizer() {
        let p = by_name("ext_rosenbrock", 10).unwrap();
        let x = vec![1.0; 10];
        assert_eq!(p.f(&x), 0.0);
        assert!(p.gradient(&x).iter().all(|&gi| gi == 0.0));
    }

    #[test]
    fn quadratic_minimizer_at_origin() {
        let p = by_name("quadratic", 5).unwrap();
        let x = vec![0.0; 5];
        assert_eq!(p.f(&x), 0.0);
        assert!(p.gradient(&x).iter().all(|&gi| gi == 0.0));
    }

    #[test]
    fn beale_default_start_value() {
        // Frozen from an independent scripted evaluation of the closed form
        // at the default start (1.0, 0.8) per block.
        let p = by_name("ext_beale", 1000).unwrap();
        let x = p.default_start();
        let expected = 4914.4345;
        assert!((p.f(&x) - expected).abs() / expected < 1e-12);

        let p10 = by_name("ext_beale", 10).unwrap();
        assert!((p10.f(&p10.default_start()) - 49.144345).abs() < 1e-9);
    }

    #[test]
    fn rejects_incompatible_dimensions() {
        assert!(matches!(
            by_name("ext_rosenbrock", 7),
            Err(ProblemError::IncompatibleDim { .. })
        ));
        assert!(matches!(
            by_name("dixmaana", 1000),
            Err(ProblemError::IncompatibleDim { .. })
        ));
        assert!(matches!(by_name("nosuch", 10), Err(ProblemError::UnknownName { .. })));
    }

    #[test]
    fn registry_adjusts_block_dims() {
        let reg = registry(1000);
        assert_eq!(reg.len(), 14);
        let dix = reg.iter().find(|p| p.name() == "dixmaana").unwrap();
        assert_eq!(dix.dim(), 999);
        let ros = reg.iter().find(|p| p.name() == "ext_rosenbrock").unwrap();
        assert_eq!(ros.dim(), 1000);
    }

    #[test]
    fn check_gradient_exact_for_quadratic() {
        let p = diag_quadratic(2, 1.0);
        let err = check_gradient(&p, &[1.0, 2.0], Some(1e-6)).unwrap();
        assert!(err <= 1e-9, "err = {err}");
    }

    #[test]
    fn check_gradient_rosenbrock_default_start() {
        let p = by_name("ext_rosenbrock", 100).unwrap();
        let err = check_gradient(&p, &p.default_start(), None).unwrap();
        assert!(err <= 1e-5, "err = {err}");
    }

    #[test]
    fn check_gradient_flags_wrong_gradient() {
        let p = Problem::new(
            "broken",
            3,
            |x| x.iter().map(|xi| xi * xi).sum(),
            |x, g| {
                for (i, xi) in x.iter().enumerate() {
                    g[i] = 3.0 * xi; // should be 2x
                }
            },
            |x| x.fill(1.0),
        );
        let err = check_gradient(&p, &[1.0, 1.0, 1.0], None).unwrap();
        assert!(err > 1e-2, "err = {err}");
    }

    #[test]
    fn check_gradient_reports_non_finite() {
        let p = Problem::new(
            "nan",
            2,
            |_| f64::NAN,
            |_, g| g.fill(0.0),
            |x| x.fill(1.0),
        );
        assert!(check_gradient(&p, &[1.0, 1.0], None).is_err());
    }

    #[test]
    fn all_registry_gradients_pass_at_start_and_perturbations() {
        // Seeded perturbations; smaller dims keep the full sweep fast.
        let mut rng = ChaCha8Rng::seed_from_u64(20240817);
        for p in registry(60) {
            let x0 = p.default_start();
            let err = check_gradient(&p, &x0, None).unwrap();
            assert!(err <= 1e-5, "{} at start: err = {err}", p.name());
            for trial in 0..10 {
                let x: Vec<f64> = x0.iter().map(|xi| xi + rng.gen_range(-0.5..0.5)).collect();
                let err = check_gradient(&p, &x, None).unwrap();
                assert!(err <= 1e-5, "{} trial {trial}: err = {err}", p.name());
            }
        }
    }
}
