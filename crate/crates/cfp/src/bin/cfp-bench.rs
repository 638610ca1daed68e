use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use cfp::bench::{emit_plot, run_case, BenchOptions, CaseConfig, SolverSummary, DEFAULT_SOLVERS};
use cfp::io::{load_problem, problem_to_json, save_problem};
use cfp::solver::{run, Algorithm, SolverConfig};
use cfp::{ball_from_box, generate_problem, lipschitz_bound, BallSpec, RandomProblemSpec, Vector};

#[derive(Parser)]
#[command(name = "cfp-bench", version, about = "Subgradient projection solvers for convex feasibility problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random problem as JSON.
    Generate(GenerateArgs),
    /// Run one solver on a problem file.
    Solve(SolveArgs),
    /// Run a table case (1-8) for several solvers.
    Case(CaseArgs),
    /// Plot trace CSVs to an SVG file.
    Plot(PlotArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Take n, nq, nl and tau from this table case.
    #[arg(long)]
    case: Option<u32>,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    nq: usize,
    #[arg(long, default_value_t = 5)]
    nl: usize,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    tau_lo: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    tau_hi: f64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RunFlags {
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, default_value_t = 1e-12)]
    eps_step: f64,
    #[arg(long)]
    eps_feas: Option<f64>,
    /// Permit relaxation parameters outside the convergent range.
    #[arg(long)]
    allow_overrelax: bool,
    /// Record the proximity function in the trace.
    #[arg(long)]
    proximity: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Problem JSON file.
    #[arg(long)]
    problem: PathBuf,
    #[arg(long, default_value = "strategic", value_parser = parse_solver)]
    solver: Algorithm,
    /// alpha (csp, ssp), sigma (ssp-steering) or c (strategic).
    #[arg(long)]
    param: Option<f64>,
    /// Ball radius for the Lipschitz bound when the problem has no box.
    #[arg(long)]
    radius: Option<f64>,
    #[command(flatten)]
    flags: RunFlags,
    /// Trace CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CaseArgs {
    #[arg(long)]
    case: u32,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Repeatable; defaults to ssp, ssp-steering and strategic.
    #[arg(long, value_parser = parse_solver)]
    solver: Vec<Algorithm>,
    #[command(flatten)]
    flags: RunFlags,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// Trace CSV files.
    #[arg(required = true)]
    traces: Vec<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    log_y: bool,
}

fn parse_solver(s: &str) -> Result<Algorithm, String> {
    Algorithm::parse(s).ok_or_else(|| format!("unknown solver {s:?}; expected csp, ssp, ssp-steering or strategic"))
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let spec = match args.case {
        Some(id) => CaseConfig::table(id)?.problem_spec(args.seed),
        None => RandomProblemSpec::new(args.n, args.nq, args.nl, [args.tau_lo, args.tau_hi], args.seed),
    };
    let problem = generate_problem(&spec)?;
    match args.out {
        Some(path) => save_problem(&problem, &path).with_context(|| format!("writing {}", path.display()))?,
        None => println!("{}", problem_to_json(&problem)?),
    }
    Ok(())
}

fn solve(args: SolveArgs) -> anyhow::Result<()> {
    let problem = load_problem(&args.problem).with_context(|| format!("loading {}", args.problem.display()))?;
    let n = problem.dimension();
    let ball = match (problem.bounds(), args.radius) {
        (Some(b), None) => ball_from_box(b.lower(), b.upper())?,
        (_, Some(r)) => BallSpec::new(Vector::zeros(n), r)?,
        (None, None) if args.solver == Algorithm::Strategic => {
            bail!("problem has no box; pass --radius to bound the Lipschitz constant")
        }
        (None, None) => BallSpec::new(Vector::zeros(n), 1.0)?,
    };
    let x0 = ball.center().clone();
    let param = args.param.unwrap_or(match args.solver {
        Algorithm::SspSteering => 0.5,
        _ => 1.0,
    });
    let config = match args.solver {
        Algorithm::Csp => SolverConfig::csp(param),
        Algorithm::Ssp => SolverConfig::ssp(param),
        Algorithm::SspSteering => SolverConfig::steering(param),
        Algorithm::Strategic => SolverConfig::strategic(lipschitz_bound(&problem, &ball)?, param),
    };
    let f = &args.flags;
    let config = config
        .with_max_iter(f.max_iter.unwrap_or(1000))
        .with_eps_step(f.eps_step)
        .with_eps_feas(f.eps_feas.unwrap_or(0.0))
        .with_overrelax(f.allow_overrelax)
        .with_proximity(f.proximity);

    let write = |csv: String| -> anyhow::Result<()> {
        match &args.out {
            Some(path) => std::fs::write(path, csv).with_context(|| format!("writing {}", path.display())),
            None => {
                print!("{csv}");
                Ok(())
            }
        }
    };
    match run(&problem, &x0, &config) {
        Ok((trace, outcome)) => {
            write(trace.to_csv_string())?;
            for w in &outcome.warnings {
                log::warn!("{w}");
            }
            eprintln!(
                "{}: {} after {} iterations, f = {}, {}",
                config.algorithm, outcome.termination, outcome.iterations_used, outcome.final_f, outcome.classification
            );
            Ok(())
        }
        Err(aborted) => {
            write(aborted.trace.to_csv_string())?;
            Err(aborted.error.into())
        }
    }
}

fn case(args: CaseArgs) -> anyhow::Result<()> {
    let case = CaseConfig::table(args.case)?;
    let solvers = if args.solver.is_empty() { DEFAULT_SOLVERS.to_vec() } else { args.solver };
    let opts = BenchOptions {
        max_iter: args.flags.max_iter,
        eps_step: args.flags.eps_step,
        eps_feas: args.flags.eps_feas,
        allow_overrelax: args.flags.allow_overrelax,
        record_proximity: args.flags.proximity,
    };
    let summary = run_case(&case, args.seed, &solvers, &args.out, &opts)?;
    println!("case {} seed {} (M = {:.6e}, r = {:.6e})", case.case_id, args.seed, summary.lipschitz, summary.radius);
    for SolverSummary { solver, termination, iterations, final_f, classification, warnings, error, .. } in &summary.runs {
        println!("  {solver:<13} {termination:<18} k = {iterations:<7} f = {final_f:<12.6e} {classification}");
        for w in warnings {
            println!("    warning: {w}");
        }
        if let Some(e) = error {
            println!("    error: {e}");
        }
    }
    println!("summary: {}", summary.summary_path.display());
    Ok(())
}

fn main() -> anyhow::Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve(a),
        Command::Case(a) => case(a),
        Command::Plot(a) => Ok(emit_plot(&a.traces, &a.out, a.log_y)?),
    }
}
