use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CfpError, Result};
use crate::lipschitz::{ball_from_box, lipschitz_bound};
use crate::probgen::{generate_problem, RandomProblemSpec};
use crate::problem::Problem;
use crate::solver::{run, Algorithm, SolverConfig};

/// One row of the head-to-head experiment table.
///
/// `param` is applied as `alpha` to SSP (and CSP), as `sigma` to the
/// steering variant and as `c` to the strategic method. `eps` is the
/// feasibility detection tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseConfig {
    pub case_id: u32,
    pub param: f64,
    pub tau: [f64; 2],
    pub n: usize,
    pub nq: usize,
    pub nl: usize,
    pub max_iter: usize,
    pub eps: f64,
}

const SMALL_TAU: [f64; 2] = [-0.1, 0.1];
const WIDE_TAU: [f64; 2] = [-10.0, 10.0];

/// Cases 1-8. Cases 1-3 leave `tau` and `eps` open; they use `[-10, 10]`
/// and `0.1`.
pub const CASES: [CaseConfig; 8] = [
    case(1, 1.1, WIDE_TAU, 3, 5, 5, 1_000),
    case(2, 1.1, WIDE_TAU, 3, 5, 5, 1_000),
    case(3, 1.98, WIDE_TAU, 3, 5, 5, 1_000),
    case(4, 1.98, SMALL_TAU, 30, 50, 50, 1_000),
    case(5, 1.98, WIDE_TAU, 30, 50, 50, 100_000),
    case(6, 2.0, SMALL_TAU, 30, 50, 50, 1_000),
    case(7, 3.0, WIDE_TAU, 3, 5, 5, 1_000),
    case(8, 5.0, SMALL_TAU, 3, 5, 5, 1_000),
];

const fn case(case_id: u32, param: f64, tau: [f64; 2], n: usize, nq: usize, nl: usize, max_iter: usize) -> CaseConfig {
    CaseConfig {
        case_id,
        param,
        tau,
        n,
        nq,
        nl,
        max_iter,
        eps: 0.1,
    }
}

impl CaseConfig {
    pub fn table(case_id: u32) -> Result<Self> {
        CASES
            .iter()
            .find(|c| c.case_id == case_id)
            .copied()
            .ok_or_else(|| CfpError::InvalidParameter(format!("unknown case {case_id}; expected 1-8")))
    }

    /// Problem recipe; the seed is mixed with the case id so that cases
    /// sharing a shape get different instances.
    pub fn problem_spec(&self, seed: u64) -> RandomProblemSpec {
        let mixed = seed ^ (self.case_id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        RandomProblemSpec::new(self.n, self.nq, self.nl, self.tau, mixed)
    }

    /// Over-relaxed rows (`param >= 2`) are run as specified.
    pub fn overrelaxed(&self) -> bool {
        self.param >= 2.0
    }
}

/// Overrides applied on top of a table row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub max_iter: Option<usize>,
    pub eps_step: f64,
    pub eps_feas: Option<f64>,
    pub allow_overrelax: bool,
    pub record_proximity: bool,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            max_iter: None,
            eps_step: 1e-12,
            eps_feas: None,
            allow_overrelax: false,
            record_proximity: false,
        }
    }
}

pub const DEFAULT_SOLVERS: [Algorithm; 3] = [Algorithm::Ssp, Algorithm::SspSteering, Algorithm::Strategic];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverSummary {
    pub case: u32,
    pub seed: u64,
    pub solver: String,
    /// `feasible_detected`, `step_converged`, `max_iterations` or `aborted`.
    pub termination: String,
    pub iterations: usize,
    pub final_f: f64,
    pub classification: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub trace: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseSummary {
    pub case: CaseConfig,
    pub seed: u64,
    pub lipschitz: f64,
    pub radius: f64,
    pub runs: Vec<SolverSummary>,
    pub summary_path: PathBuf,
}

impl CaseSummary {
    pub fn run_for(&self, solver: Algorithm) -> Option<&SolverSummary> {
        self.runs.iter().find(|r| r.solver == solver.name())
    }
}

pub fn trace_file_name(case_id: u32, solver: Algorithm) -> String {
    format!("case{case_id}_{}.csv", solver.name())
}

pub fn solver_config(case: &CaseConfig, solver: Algorithm, lipschitz: f64, opts: &BenchOptions) -> SolverConfig {
    let base = match solver {
        Algorithm::Csp => SolverConfig::csp(case.param),
        Algorithm::Ssp => SolverConfig::ssp(case.param),
        Algorithm::SspSteering => SolverConfig::steering(case.param),
        Algorithm::Strategic => SolverConfig::strategic(lipschitz, case.param),
    };
    base.with_max_iter(opts.max_iter.unwrap_or(case.max_iter))
        .with_eps_step(opts.eps_step)
        .with_eps_feas(opts.eps_feas.unwrap_or(case.eps))
        .with_overrelax(opts.allow_overrelax || case.overrelaxed())
        .with_proximity(opts.record_proximity)
}

/// Generates the case problem, derives `x0` and `M` from its box and runs
/// each solver from the same start, writing one trace CSV per solver and
/// `case{id}_summary.json` into `outdir`.
///
/// Solvers run concurrently. A solver that aborts still gets its partial
/// trace written and an `aborted` summary entry.
pub fn run_case(case: &CaseConfig, seed: u64, solvers: &[Algorithm], outdir: &Path, opts: &BenchOptions) -> Result<CaseSummary> {
    fs::create_dir_all(outdir)?;
    let problem = generate_problem(&case.problem_spec(seed))?;
    let bounds = problem
        .bounds()
        .ok_or_else(|| CfpError::InvalidParameter("generated problem has no box".into()))?;
    let ball = ball_from_box(bounds.lower(), bounds.upper())?;
    let lipschitz = lipschitz_bound(&problem, &ball)?;
    let x0 = ball.center().clone();

    let results: Vec<Result<SolverSummary>> = std::thread::scope(|scope| {
        let handles: Vec<_> = solvers
            .iter()
            .map(|&solver| {
                let problem: &Problem = &problem;
                let x0 = &x0;
                scope.spawn(move || {
                    let config = solver_config(case, solver, lipschitz, opts);
                    run_one(problem, x0, &config, case.case_id, seed, outdir)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>>>()?;

    let summary_path = outdir.join(format!("case{}_summary.json", case.case_id));
    let json = serde_json::to_string_pretty(&runs).map_err(|e| CfpError::Io(e.to_string()))?;
    fs::write(&summary_path, json + "\n")?;
    Ok(CaseSummary {
        case: *case,
        seed,
        lipschitz,
        radius: ball.radius(),
        runs,
        summary_path,
    })
}

fn run_one(problem: &Problem, x0: &crate::function::Vector, config: &SolverConfig, case_id: u32, seed: u64, outdir: &Path) -> Result<SolverSummary> {
    let solver = config.algorithm;
    let path = outdir.join(trace_file_name(case_id, solver));
    let warnings = config.validate(problem.len()).unwrap_or_default();
    let summary = match run(problem, x0, config) {
        Ok((trace, outcome)) => {
            fs::write(&path, trace.to_csv_string())?;
            SolverSummary {
                case: case_id,
                seed,
                solver: solver.name().into(),
                termination: outcome.termination.to_string(),
                iterations: outcome.iterations_used,
                final_f: outcome.final_f,
                classification: outcome.classification.to_string(),
                warnings: outcome.warnings,
                error: None,
                trace: path.display().to_string(),
            }
        }
        Err(aborted) => {
            log::warn!("case {case_id} {solver}: {}", aborted.error);
            fs::write(&path, aborted.trace.to_csv_string())?;
            let last = aborted.trace.last();
            SolverSummary {
                case: case_id,
                seed,
                solver: solver.name().into(),
                termination: "aborted".into(),
                iterations: last.map_or(0, |r| r.k),
                final_f: last.map_or(f64::NAN, |r| r.f_val),
                classification: "inconclusive".into(),
                warnings,
                error: Some(aborted.error.to_string()),
                trace: path.display().to_string(),
            }
        }
    };
    Ok(summary)
}
