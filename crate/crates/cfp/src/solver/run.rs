use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CfpError, Result};
use crate::function::{check_dim, check_finite, Vector};
use crate::problem::Problem;
use crate::projection::{proximity, uniform_weights};

use super::config::{Algorithm, SolverConfig, WeightPolicy};
use super::steps::{csp_step, simultaneous, steering_term, strategic_step};
use super::trace::IterateTrace;

/// Iterates with a larger norm are treated as divergent.
pub const DIVERGENCE_NORM: f64 = 1e12;
/// Default stabilization window for [`classify_outcome`].
pub const DEFAULT_WINDOW: usize = 50;
/// Default relative stabilization tolerance for [`classify_outcome`].
pub const DEFAULT_STAB_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    FeasibleDetected,
    StepConverged,
    MaxIterations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    /// `f` settled at or below the feasibility tolerance.
    FeasibleSolutionApproximated,
    /// `f` settled at a positive level with vanishing steps: the problem
    /// looks infeasible and the iterate approximates a minimizer of `f`.
    SurrogateMinimizerApproximated,
    Inconclusive,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::FeasibleDetected => "feasible_detected",
            Termination::StepConverged => "step_converged",
            Termination::MaxIterations => "max_iterations",
        })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::FeasibleSolutionApproximated => "feasible_solution_approximated",
            Classification::SurrogateMinimizerApproximated => "surrogate_minimizer_approximated",
            Classification::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub final_x: Vector,
    pub final_f: f64,
    pub iterations_used: usize,
    pub termination: Termination,
    pub classification: Classification,
    pub warnings: Vec<String>,
}

/// A run that stopped on an error; the trace holds every row recorded
/// before the failure.
#[derive(Debug, Clone)]
pub struct RunAborted {
    pub error: CfpError,
    pub trace: IterateTrace,
}

impl fmt::Display for RunAborted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "run aborted after {} rows: {}", self.trace.len(), self.error)
    }
}

impl std::error::Error for RunAborted {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.error)
    }
}

impl From<CfpError> for RunAborted {
    fn from(error: CfpError) -> Self {
        Self {
            error,
            trace: IterateTrace::new(),
        }
    }
}

/// Runs the configured method from `x0`.
///
/// Row `k` of the trace describes `x^k`. One iteration is a full sweep
/// through the constraints: for CSP that is `m` cyclic sub-steps, for the
/// other methods a single step. Terminates on the first of
/// `f(x^k) <= eps_feas`, a relative step below `eps_step`, or
/// `k = max_iter`; the last row is always the returned iterate.
pub fn run(problem: &Problem, x0: &Vector, config: &SolverConfig) -> std::result::Result<(IterateTrace, RunOutcome), RunAborted> {
    check_dim(problem.dimension(), x0)?;
    check_finite(x0, "initial point")?;
    let warnings = config.validate(problem.len())?;
    for w in &warnings {
        log::warn!("{}: {w}", config.algorithm);
    }

    let m = problem.len();
    let ssp_weights = match &config.weights {
        WeightPolicy::Fixed(w) if config.algorithm != Algorithm::Strategic => w.clone(),
        _ => uniform_weights(m),
    };
    let prox_weights = uniform_weights(m);
    let record_prox = config.record_proximity && !problem.has_custom();

    let mut trace = IterateTrace::new();
    let mut x = x0.clone();
    let mut k = 0usize;
    let mut step_converged = false;

    let termination = loop {
        let f_val = problem.envelope_value_unchecked(&x);
        let norm = x.norm();
        if !f_val.is_finite() || !norm.is_finite() || norm > DIVERGENCE_NORM {
            return Err(RunAborted {
                error: CfpError::Diverged { iteration: k, norm },
                trace,
            });
        }
        let prox = if record_prox {
            match proximity(problem, &prox_weights, &x) {
                Ok(p) => Some(p),
                Err(e) => {
                    log::debug!("proximity unavailable at k={k}: {e}");
                    None
                }
            }
        } else {
            None
        };

        let stop = if f_val <= config.eps_feas {
            Some(Termination::FeasibleDetected)
        } else if step_converged {
            Some(Termination::StepConverged)
        } else if k >= config.max_iter {
            Some(Termination::MaxIterations)
        } else {
            None
        };
        if let Some(t) = stop {
            trace.push(k, x.clone(), f_val, 0.0, 0.0, prox);
            break t;
        }

        let stepped = match config.algorithm {
            Algorithm::Csp => {
                let mut y = x.clone();
                for j in 0..m {
                    y = csp_step(problem, &y, j, config.alpha)?;
                }
                Ok((y, config.alpha))
            }
            Algorithm::Ssp => Ok((simultaneous(problem, &x, config.alpha, &ssp_weights), config.alpha)),
            Algorithm::SspSteering => {
                let sigma_k = steering_term(config.sigma, k);
                Ok((simultaneous(problem, &x, sigma_k, &ssp_weights), sigma_k))
            }
            Algorithm::Strategic => strategic_step(problem, &x, config.lipschitz, config.c, &config.weights)
                .map(|s| (s.x, s.lambda)),
        };
        let (next, relax) = match stepped {
            Ok(v) => v,
            Err(error) => return Err(RunAborted { error, trace }),
        };
        let step_norm = (&next - &x).norm();
        if !step_norm.is_finite() {
            return Err(RunAborted {
                error: CfpError::Diverged {
                    iteration: k + 1,
                    norm: next.norm(),
                },
                trace,
            });
        }
        step_converged = step_norm <= config.eps_step * norm.max(1.0);
        trace.push(k, x, f_val, step_norm, relax, prox);
        x = next;
        k += 1;
    };

    let final_f = trace.last().map(|r| r.f_val).unwrap_or(f64::NAN);
    let classification = if termination == Termination::FeasibleDetected {
        Classification::FeasibleSolutionApproximated
    } else {
        classify_outcome(&trace, DEFAULT_WINDOW, DEFAULT_STAB_TOL, config.eps_feas)
            .unwrap_or(Classification::Inconclusive)
    };
    let outcome = RunOutcome {
        final_x: x,
        final_f,
        iterations_used: k,
        termination,
        classification,
        warnings,
    };
    Ok((trace, outcome))
}

/// Reads the tail of a trace the way the cumulative path length `S_k` and
/// the `f` history are meant to be read on possibly infeasible problems.
///
/// Over the last `window` rows, with `tol = stab_tol * max(1, |f_last|)`:
/// if every step is at most `tol` and the `f` values span at most `tol`,
/// the run has stabilized, and the level decides between a feasible point
/// (`f_last <= eps_feas`) and a surrogate minimizer (`f_last > eps_feas`).
/// Anything else is inconclusive.
pub fn classify_outcome(trace: &IterateTrace, window: usize, stab_tol: f64, eps_feas: f64) -> Result<Classification> {
    if window == 0 {
        return Err(CfpError::InvalidParameter("window must be positive".into()));
    }
    if trace.len() < window {
        return Err(CfpError::TraceTooShort {
            len: trace.len(),
            window,
        });
    }
    let tail = &trace.rows()[trace.len() - window..];
    let f_last = tail[window - 1].f_val;
    let tol = stab_tol * f_last.abs().max(1.0);
    let steps_small = tail.iter().all(|r| r.step_norm <= tol);
    let (lo, hi) = tail
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r.f_val), hi.max(r.f_val)));
    if steps_small && hi - lo <= tol {
        if f_last > eps_feas {
            Ok(Classification::SurrogateMinimizerApproximated)
        } else {
            Ok(Classification::FeasibleSolutionApproximated)
        }
    } else {
        Ok(Classification::Inconclusive)
    }
}
