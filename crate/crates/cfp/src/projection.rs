//! Exact orthogonal projections onto halfspaces, boxes and sublevel sets of
//! convex quadratics, plus the weighted proximity function built on them.

use nalgebra::{Cholesky, SymmetricEigen};

use crate::error::{CfpError, Result};
use crate::function::{check_dim, check_finite, ConstraintFunction, Matrix, Vector};
use crate::problem::Problem;

/// Default `|f(P(z))|` tolerance for quadratic projections.
pub const DEFAULT_PROJECTION_TOL: f64 = 1e-12;

const MAX_ROOT_ITERATIONS: usize = 500;
const MAX_BRACKET_DOUBLINGS: usize = 200;

/// Projection onto `{x : <a, x> + b <= 0}`.
pub fn project_halfspace(a: &Vector, b: f64, z: &Vector) -> Result<Vector> {
    check_dim(a.len(), z)?;
    check_finite(z, "projected point")?;
    let norm2 = a.norm_squared();
    if norm2 == 0.0 {
        return Err(CfpError::ZeroNormal);
    }
    let viol = a.dot(z) + b;
    if viol <= 0.0 {
        return Ok(z.clone());
    }
    Ok(z - a * (viol / norm2))
}

/// Componentwise clamp into `[lower, upper]`.
pub fn project_box(lower: &Vector, upper: &Vector, z: &Vector) -> Result<Vector> {
    check_dim(lower.len(), upper)?;
    check_dim(lower.len(), z)?;
    if let Some(index) = (0..lower.len()).find(|&j| lower[j] > upper[j]) {
        return Err(CfpError::EmptyBox { index });
    }
    Ok(Vector::from_fn(z.len(), |j, _| z[j].clamp(lower[j], upper[j])))
}

/// `inf_x <x, U x> + <a, x> + b`, or `-inf` when unbounded below.
fn quadratic_infimum(u: &Matrix, a: &Vector, b: f64) -> f64 {
    let eig = SymmetricEigen::new(u.clone());
    let scale = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let a_rot = eig.eigenvectors.transpose() * a;
    let a_scale = a.amax().max(f64::MIN_POSITIVE);
    let mut inf = b;
    for (lam, ar) in eig.eigenvalues.iter().zip(a_rot.iter()) {
        if *lam > 1e-12 * scale {
            inf -= ar * ar / (4.0 * lam);
        } else if ar.abs() > 1e-12 * a_scale {
            return f64::NEG_INFINITY;
        }
    }
    inf
}

/// Projection onto `{x : <x, U x> + <a, x> + b <= 0}`.
///
/// Outside the set the projection is the KKT point `x(mu)` solving
/// `(I + 2 mu U) x = z - mu a` with `f(x(mu)) = 0`. `f(x(mu))` is
/// nonincreasing in `mu`, so the multiplier is bracketed by doubling and then
/// refined with a secant step safeguarded by bisection. The returned point is
/// always on the feasible side. When `tol` is below what floating point can
/// resolve, iteration stops once the bracket collapses.
pub fn project_quadratic_sublevel(f: &ConstraintFunction, z: &Vector, tol: f64) -> Result<Vector> {
    let ConstraintFunction::Quadratic { u, a, b } = f else {
        return Err(CfpError::Unsupported(
            "sublevel projection requires a quadratic function".into(),
        ));
    };
    if !(tol > 0.0) {
        return Err(CfpError::InvalidParameter(format!(
            "projection tolerance must be positive, got {tol}"
        )));
    }
    let fz = f.evaluate(z)?;
    if fz <= 0.0 {
        return Ok(z.clone());
    }
    if quadratic_infimum(u, a, *b) > 0.0 {
        return Err(CfpError::EmptySublevelSet);
    }

    let n = z.len();
    let point = |mu: f64| -> Result<Vector> {
        let system = Matrix::identity(n, n) + u * (2.0 * mu);
        let chol = Cholesky::new(system)
            .ok_or_else(|| CfpError::NonFinite("KKT system factorization".into()))?;
        Ok(chol.solve(&(z - a * mu)))
    };
    let phi = |x: &Vector| f.value_unchecked(x);

    // phi(lo) > 0 >= phi(hi)
    let (mut lo, mut phi_lo) = (0.0_f64, fz);
    let mut hi = 1.0_f64;
    let mut x_hi = point(hi)?;
    let mut phi_hi = phi(&x_hi);
    let mut doublings = 0;
    while phi_hi > 0.0 {
        doublings += 1;
        if doublings > MAX_BRACKET_DOUBLINGS {
            return Err(CfpError::NoConvergence {
                iterations: doublings,
            });
        }
        lo = hi;
        phi_lo = phi_hi;
        hi *= 2.0;
        x_hi = point(hi)?;
        phi_hi = phi(&x_hi);
    }

    let mut last_width = hi - lo;
    for _ in 0..MAX_ROOT_ITERATIONS {
        if phi_hi >= -tol {
            return Ok(x_hi);
        }
        let width = hi - lo;
        if width <= 4.0 * f64::EPSILON * hi {
            return Ok(x_hi);
        }
        let secant = hi - phi_hi * (hi - lo) / (phi_hi - phi_lo);
        let guard = 0.01 * width;
        let mid = if secant.is_finite()
            && secant > lo + guard
            && secant < hi - guard
            && width < 0.5 * last_width
        {
            secant
        } else {
            0.5 * (lo + hi)
        };
        last_width = width;
        if mid <= lo || mid >= hi {
            return Ok(x_hi);
        }
        let x_mid = point(mid)?;
        let phi_mid = phi(&x_mid);
        if phi_mid > 0.0 {
            lo = mid;
            phi_lo = phi_mid;
        } else {
            hi = mid;
            phi_hi = phi_mid;
            x_hi = x_mid;
        }
    }
    Err(CfpError::NoConvergence {
        iterations: MAX_ROOT_ITERATIONS,
    })
}

/// Exact projection onto the zero-sublevel set of one function.
pub fn project_onto(f: &ConstraintFunction, z: &Vector) -> Result<Vector> {
    match f {
        ConstraintFunction::Affine { a, b } => project_halfspace(a, *b, z),
        ConstraintFunction::Quadratic { .. } => project_quadratic_sublevel(f, z, DEFAULT_PROJECTION_TOL),
        ConstraintFunction::Custom(_) => Err(CfpError::Unsupported(
            "custom oracles have no exact projection".into(),
        )),
    }
}

/// Uniform weights `1/m`.
pub fn uniform_weights(m: usize) -> Vec<f64> {
    vec![1.0 / m as f64; m]
}

pub(crate) fn validate_weights(weights: &[f64], m: usize) -> Result<()> {
    if weights.len() != m {
        return Err(CfpError::InvalidWeights(format!(
            "expected {m} weights, got {}",
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
        return Err(CfpError::InvalidWeights(format!("weight {w} is not positive")));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(CfpError::InvalidWeights(format!("weights sum to {sum}, not 1")));
    }
    Ok(())
}

/// `p(x) = 1/2 sum_i w_i ||P_i(x) - x||^2`.
///
/// Fails with [`CfpError::ProximityUnavailable`] when any function is a
/// custom oracle.
pub fn proximity(problem: &Problem, weights: &[f64], x: &Vector) -> Result<f64> {
    validate_weights(weights, problem.len())?;
    check_dim(problem.dimension(), x)?;
    if let Some(index) = problem.functions().iter().position(ConstraintFunction::is_custom) {
        return Err(CfpError::ProximityUnavailable { index });
    }
    let mut total = 0.0;
    for (f, w) in problem.functions().iter().zip(weights) {
        let p = project_onto(f, x)?;
        total += w * (p - x).norm_squared();
    }
    Ok(0.5 * total)
}
