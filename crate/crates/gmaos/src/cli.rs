//! Command-line front end: `solve`, `bench`, `check-grad` and config
//! handling.
//!
//! Exit codes: 0 on success, 1 when a solver run ends in a failure status
//! (or a gradient check fails), 2 on usage errors.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::bench::{self, Metric, SolverKind};
use crate::config::SolverConfig;
use crate::problems;
use crate::solver::Status;

#[derive(Parser, Debug)]
#[command(name = "gmaos", version, about = "Gradient methods with approximately optimal stepsizes")]
struct Cli {
    /// Config file with flat key=value overrides.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Print the effective configuration and exit.
    #[arg(long, global = true)]
    dump_config: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one solver on one problem.
    Solve(SolveArgs),
    /// Run the full solver-by-problem matrix and write profile data.
    Bench(BenchArgs),
    /// Verify analytic gradients against central differences.
    CheckGrad(CheckGradArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    problem: String,
    #[arg(long, default_value_t = 1000)]
    dim: usize,
    #[arg(long, default_value = "gmaos")]
    solver: String,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    max_feval: Option<usize>,
    /// Write a per-iteration CSV trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated solver list.
    #[arg(long, default_value = "gmaos,bb")]
    solvers: String,
    #[arg(long, default_value_t = 1000)]
    dim: usize,
    #[arg(long, default_value = "records.csv")]
    out: PathBuf,
    #[arg(long, default_value = "profiles.json")]
    profiles: PathBuf,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    max_feval: Option<usize>,
}

#[derive(Args, Debug)]
struct CheckGradArgs {
    #[arg(long, default_value_t = 100)]
    dim: usize,
    /// Check a single problem instead of the whole registry.
    #[arg(long)]
    problem: Option<String>,
}

/// Runs the CLI against an argument vector; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };

    let cfg = match effective_config(cli.config.as_deref()) {
        Ok(cfg) => cfg,
        Err(msg) => return usage_error(&msg),
    };

    if cli.dump_config {
        print!("{}", cfg.dump());
        return 0;
    }

    match cli.command {
        None => usage_error("missing subcommand; try `gmaos --help`"),
        Some(Command::Solve(args)) => cmd_solve(args, cfg),
        Some(Command::Bench(args)) => cmd_bench(args, cfg),
        Some(Command::CheckGrad(args)) => cmd_check_grad(args),
    }
}

/// Defaults, overlaid by `GMAOS_CONFIG` (if set), then by `--config`.
fn effective_config(flag_path: Option<&Path>) -> Result<SolverConfig, String> {
    let mut cfg = SolverConfig::default();
    if let Ok(env_path) = std::env::var("GMAOS_CONFIG") {
        let text = fs::read_to_string(&env_path)
            .map_err(|e| format!("cannot read GMAOS_CONFIG={env_path}: {e}"))?;
        cfg.apply(&text).map_err(|e| format!("{env_path}: {e}"))?;
    }
    if let Some(path) = flag_path {
        let text = fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        cfg.apply(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(cfg)
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn cmd_solve(args: SolveArgs, mut cfg: SolverConfig) -> i32 {
    if let Some(e) = args.epsilon {
        cfg.epsilon = e;
    }
    if let Some(n) = args.max_iter {
        cfg.max_iter = n;
    }
    if let Some(n) = args.max_feval {
        cfg.max_feval = n;
    }
    cfg.collect_trace = args.trace.is_some();

    let Some(kind) = SolverKind::parse(&args.solver) else {
        return usage_error(&format!("unknown solver `{}`; valid: gmaos, bb", args.solver));
    };
    let problem = match problems::by_name(&args.problem, args.dim) {
        Ok(p) => p,
        Err(e) => return usage_error(&e.to_string()),
    };

    let x0 = problem.default_start();
    let report = kind.run(&problem, &x0, &cfg);
    println!(
        "{} {} dim={} status={} iters={} nf={} ng={} f={:.6e} gnorm_inf={:.3e} time={:.3}s",
        kind.as_str(),
        problem.name(),
        problem.dim(),
        report.status.as_str(),
        report.n_iter,
        report.n_feval,
        report.n_geval,
        report.final_f,
        report.final_gnorm_inf,
        report.wall_time_seconds,
    );

    if let Some(path) = &args.trace {
        if let Some(rows) = &report.trace {
            if let Err(e) = write_trace(path, rows) {
                eprintln!("error: {e}");
                return 1;
            }
        }
    }

    if report.status == Status::Converged {
        0
    } else {
        1
    }
}

fn write_trace(path: &Path, rows: &[crate::solver::TraceRow]) -> std::io::Result<()> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "k,f,gnorm_inf,alpha,branch,C,Q,nf,ng")?;
    for r in rows {
        writeln!(
            file,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            r.f,
            r.gnorm_inf,
            r.alpha,
            r.branch.as_str(),
            r.c,
            r.q,
            r.nf,
            r.ng
        )?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs, mut cfg: SolverConfig) -> i32 {
    if let Some(e) = args.epsilon {
        cfg.epsilon = e;
    }
    if let Some(n) = args.max_iter {
        cfg.max_iter = n;
    }
    if let Some(n) = args.max_feval {
        cfg.max_feval = n;
    }

    let mut solvers = Vec::new();
    for name in args.solvers.split(',') {
        match SolverKind::parse(name.trim()) {
            Some(k) => solvers.push(k),
            None => return usage_error(&format!("unknown solver `{name}`; valid: gmaos, bb")),
        }
    }
    if solvers.is_empty() {
        return usage_error("--solvers must name at least one solver");
    }

    let problems = problems::registry(args.dim);
    let records = bench::run_matrix(&solvers, &problems, &cfg, args.workers);
    if let Err(e) = bench::write_records_csv(&args.out, &records) {
        eprintln!("error: {e}");
        return 1;
    }

    let mut curves = Vec::new();
    if solvers.len() >= 2 {
        for metric in Metric::ALL {
            curves.extend(bench::performance_profile(&records, metric));
        }
    }
    if let Err(e) = bench::write_profiles_json(&args.profiles, &curves) {
        eprintln!("error: {e}");
        return 1;
    }

    let solved = records.iter().filter(|r| r.converged()).count();
    println!(
        "{} records ({} converged) -> {}, profiles -> {}",
        records.len(),
        solved,
        args.out.display(),
        args.profiles.display(),
    );
    if solved == records.len() {
        0
    } else {
        1
    }
}

fn cmd_check_grad(args: CheckGradArgs) -> i32 {
    let problems = match &args.problem {
        Some(name) => match problems::by_name(name, args.dim) {
            Ok(p) => vec![p],
            Err(e) => return usage_error(&e.to_string()),
        },
        None => problems::registry(args.dim),
    };

    let mut all_ok = true;
    println!("{:<22} {:>6} {:>12}  result", "problem", "dim", "max_rel_err");
    for p in &problems {
        let x = p.default_start();
        match problems::check_gradient(p, &x, None) {
            Ok(err) => {
                let ok = err <= 1e-5;
                all_ok &= ok;
                println!(
                    "{:<22} {:>6} {:>12.3e}  {}",
                    p.name(),
                    p.dim(),
                    err,
                    if ok { "ok" } else { "FAIL" }
                );
            }
            Err(e) => {
                all_ok = false;
                println!("{:<22} {:>6} {:>12}  FAIL ({e})", p.name(), p.dim(), "-");
            }
        }
    }
    if all_ok {
        0
    } else {
        1
    }
}
