//! Single iterative steps of the four methods.

use crate::error::{CfpError, Result};
use crate::function::{check_dim, check_finite, ConstraintFunction, Vector};
use crate::problem::{envelope_from_values, Problem};
use crate::projection::validate_weights;

use super::config::WeightPolicy;

/// `x - relax * f(x) / ||t||^2 * t` when `f(x) > 0` and `t != 0`, otherwise
/// `None` (the iterate stays put).
fn subgradient_projection(f: &ConstraintFunction, x: &Vector, relax: f64) -> Option<Vector> {
    subgradient_displacement(f, x, relax).map(|d| x + d)
}

/// The displacement `y - x` of a relaxed subgradient projection.
fn subgradient_displacement(f: &ConstraintFunction, x: &Vector, relax: f64) -> Option<Vector> {
    let value = f.value_unchecked(x);
    if !(value > 0.0) {
        return None;
    }
    let t = f.subgradient_unchecked(x);
    let norm2 = t.norm_squared();
    if norm2 == 0.0 {
        return None;
    }
    Some(t * (-relax * value / norm2))
}

fn check_point(problem: &Problem, x: &Vector) -> Result<()> {
    check_dim(problem.dimension(), x)?;
    check_finite(x, "iterate")
}

/// One cyclic step using the function with index `k mod m`.
pub fn csp_step(problem: &Problem, x: &Vector, k: usize, alpha: f64) -> Result<Vector> {
    check_point(problem, x)?;
    let f = &problem.functions()[k % problem.len()];
    Ok(subgradient_projection(f, x, alpha).unwrap_or_else(|| x.clone()))
}

// sum_i w_i y_i written as x + sum_i w_i (y_i - x), exact when no y_i moves
pub(crate) fn simultaneous(problem: &Problem, x: &Vector, relax: f64, weights: &[f64]) -> Vector {
    let mut shift = Vector::zeros(x.len());
    let mut moved = false;
    for (f, w) in problem.functions().iter().zip(weights) {
        if let Some(d) = subgradient_displacement(f, x, relax) {
            shift.axpy(*w, &d, 1.0);
            moved = true;
        }
    }
    if moved {
        x + shift
    } else {
        x.clone()
    }
}

/// Weighted average of the per-function relaxed subgradient projections.
pub fn ssp_step(problem: &Problem, x: &Vector, alpha: f64, weights: &[f64]) -> Result<Vector> {
    check_point(problem, x)?;
    validate_weights(weights, problem.len())?;
    Ok(simultaneous(problem, x, alpha, weights))
}

/// Steering term `sigma / (k + 1)`.
pub fn steering_term(sigma: f64, k: usize) -> f64 {
    sigma / (k as f64 + 1.0)
}

/// [`ssp_step`] with relaxation `sigma / (k + 1)`.
pub fn ssp_steering_step(
    problem: &Problem,
    x: &Vector,
    k: usize,
    sigma: f64,
    weights: &[f64],
) -> Result<Vector> {
    ssp_step(problem, x, steering_term(sigma, k), weights)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategicStep {
    pub x: Vector,
    pub lambda: f64,
    /// Envelope value at the point the step was taken from.
    pub f_val: f64,
}

/// Weights on the active set; entries outside `active` are zero.
fn active_weights(policy: &WeightPolicy, active: &[usize], m: usize) -> Vec<(usize, f64)> {
    match policy {
        WeightPolicy::SingleMaxIndex => vec![(active[0], 1.0)],
        WeightPolicy::Fixed(w) if w.len() == m => {
            let total: f64 = active.iter().map(|&i| w[i]).sum();
            if total > 0.0 {
                active.iter().map(|&i| (i, w[i] / total)).collect()
            } else {
                uniform_over(active)
            }
        }
        _ => uniform_over(active),
    }
}

fn uniform_over(active: &[usize]) -> Vec<(usize, f64)> {
    let w = 1.0 / active.len() as f64;
    active.iter().map(|&i| (i, w)).collect()
}

/// `lambda = c max(0, f) / M^2`, nudged by at most a few ulps so that
/// `lambda M^2 >= max(0, f)` holds in floating point when `c >= 1`.
pub(crate) fn strategic_lambda(f_val: f64, m_bound: f64, c: f64) -> f64 {
    let positive = f_val.max(0.0);
    let m2 = m_bound * m_bound;
    let mut lambda = c * positive / m2;
    if c >= 1.0 {
        // either association of lambda * M * M must clear the lower bound
        for _ in 0..8 {
            if lambda * m2 >= positive && lambda * m_bound * m_bound >= positive {
                break;
            }
            lambda = lambda.next_up();
        }
    }
    lambda
}

/// `x - lambda sum_{i in I(x)} w_i xi_i` with `lambda = c max(0, f(x)) / M^2`.
pub fn strategic_step(
    problem: &Problem,
    x: &Vector,
    m_bound: f64,
    c: f64,
    policy: &WeightPolicy,
) -> Result<StrategicStep> {
    check_point(problem, x)?;
    if !(m_bound > 0.0) {
        return Err(CfpError::InvalidParameter(format!("M must be positive, got {m_bound}")));
    }
    if !(c >= 0.0) {
        return Err(CfpError::InvalidParameter(format!(
            "strategic coefficient must be non-negative, got {c}"
        )));
    }
    let values: Vec<f64> = problem.functions().iter().map(|f| f.value_unchecked(x)).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(CfpError::NonFinite("function value".into()));
    }
    let env = envelope_from_values(values);
    let lambda = strategic_lambda(env.value, m_bound, c);
    if lambda == 0.0 {
        return Ok(StrategicStep {
            x: x.clone(),
            lambda: 0.0,
            f_val: env.value,
        });
    }
    let mut direction = Vector::zeros(x.len());
    for (i, w) in active_weights(policy, &env.active, problem.len()) {
        let xi = problem.functions()[i].subgradient_unchecked(x);
        direction.axpy(w, &xi, 1.0);
    }
    Ok(StrategicStep {
        x: x - direction * lambda,
        lambda,
        f_val: env.value,
    })
}
