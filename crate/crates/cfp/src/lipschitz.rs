//! Initial point, ball radius and Lipschitz bound for problems made of affine
//! and quadratic functions.
//!
//! For a box `l <= x <= u` the ball is centered at the midpoint of the
//! enclosing hypercube `[l_min, u_max]^n` with radius `sqrt(n) * (u_max - l_min)`,
//! so the hypercube lies in the half-radius ball. Over that ball the envelope
//! is Lipschitz with constant `max_i L_i`, where `L_i = ||a_i||` for affine
//! functions and `L_i = 2 ||U_i||_inf (||x0|| + r) + ||a_i||` for quadratics.

use crate::error::{CfpError, Result};
use crate::function::{check_dim, ConstraintFunction, Matrix, Vector};
use crate::problem::Problem;

/// Closed ball `B(center, radius)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BallSpec {
    center: Vector,
    radius: f64,
}

impl BallSpec {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(CfpError::InvalidParameter(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn contains(&self, x: &Vector) -> bool {
        (x - &self.center).norm() <= self.radius
    }
}

pub fn ball_from_box(lower: &Vector, upper: &Vector) -> Result<BallSpec> {
    check_dim(lower.len(), upper)?;
    if let Some(index) = (0..lower.len()).find(|&j| lower[j] > upper[j]) {
        return Err(CfpError::EmptyBox { index });
    }
    let n = lower.len();
    let l_min = lower.min();
    let u_max = upper.max();
    let delta = u_max - l_min;
    let center = Vector::from_element(n, 0.5 * (l_min + u_max));
    // a degenerate single-point box still needs a positive radius
    let radius = (n as f64).sqrt() * delta;
    BallSpec::new(center, if radius > 0.0 { radius } else { f64::MIN_POSITIVE })
}

/// Induced infinity norm: largest absolute row sum.
pub fn matrix_inf_norm(u: &Matrix) -> f64 {
    u.row_iter()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Per-function constants `L_i` over the ball.
pub fn lipschitz_constants(problem: &Problem, ball: &BallSpec) -> Result<Vec<f64>> {
    check_dim(problem.dimension(), ball.center())?;
    let reach = ball.center().norm() + ball.radius();
    problem
        .functions()
        .iter()
        .enumerate()
        .map(|(i, f)| match f {
            ConstraintFunction::Affine { a, .. } => Ok(a.norm()),
            ConstraintFunction::Quadratic { u, a, .. } => {
                Ok(2.0 * matrix_inf_norm(u) * reach + a.norm())
            }
            ConstraintFunction::Custom(_) => Err(CfpError::Unsupported(format!(
                "function {i} is a custom oracle; supply M explicitly"
            ))),
        })
        .collect()
}

/// `L = max_i L_i`, a Lipschitz constant of the envelope over the ball.
pub fn lipschitz_bound(problem: &Problem, ball: &BallSpec) -> Result<f64> {
    Ok(lipschitz_constants(problem, ball)?
        .into_iter()
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn ball_examples() {
        let b = ball_from_box(&v(&[-1.0, -1.0]), &v(&[1.0, 1.0])).unwrap();
        assert_eq!(b.center(), &v(&[0.0, 0.0]));
        assert!((b.radius() - 2.0 * 2f64.sqrt()).abs() < 1e-15);

        let b = ball_from_box(&v(&[0.0]), &v(&[4.0])).unwrap();
        assert_eq!(b.center(), &v(&[2.0]));
        assert_eq!(b.radius(), 4.0);

        let b = ball_from_box(&v(&[-0.1; 3]), &v(&[0.1; 3])).unwrap();
        assert_eq!(b.center(), &v(&[0.0; 3]));
        assert!((b.radius() - 0.2 * 3f64.sqrt()).abs() < 1e-15);

        assert_eq!(
            ball_from_box(&v(&[1.0]), &v(&[0.0])),
            Err(CfpError::EmptyBox { index: 0 })
        );
    }

    #[test]
    fn inf_norm_examples() {
        assert_eq!(matrix_inf_norm(&Matrix::identity(2, 2)), 1.0);
        assert_eq!(
            matrix_inf_norm(&Matrix::from_row_slice(2, 2, &[1.0, -2.0, 3.0, 4.0])),
            7.0
        );
        assert_eq!(matrix_inf_norm(&Matrix::zeros(3, 3)), 0.0);
    }

    #[test]
    fn bound_examples() {
        let ball = BallSpec::new(v(&[0.0, 0.0]), 1.0).unwrap();
        let aff = ConstraintFunction::affine(v(&[3.0, 4.0]), 0.0).unwrap();
        let quad = ConstraintFunction::quadratic(Matrix::identity(2, 2), v(&[0.0, 0.0]), -1.0).unwrap();
        let p = Problem::new(vec![aff.clone()]).unwrap();
        assert_eq!(lipschitz_bound(&p, &ball).unwrap(), 5.0);
        let p = Problem::new(vec![quad.clone()]).unwrap();
        assert_eq!(lipschitz_bound(&p, &ball).unwrap(), 2.0);
        let p = Problem::new(vec![aff, quad]).unwrap();
        assert_eq!(lipschitz_bound(&p, &ball).unwrap(), 5.0);
    }

    #[test]
    fn bound_grows_with_radius() {
        let quad = ConstraintFunction::quadratic(
            Matrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]),
            v(&[1.0, -1.0]),
            0.0,
        )
        .unwrap();
        let p = Problem::new(vec![quad]).unwrap();
        let mut last = 0.0;
        for r in [0.1, 0.5, 1.0, 2.0, 10.0] {
            let l = lipschitz_bound(&p, &BallSpec::new(v(&[1.0, 1.0]), r).unwrap()).unwrap();
            assert!(l >= last);
            last = l;
        }
    }

    #[test]
    fn box_corners_inside_ball() {
        let (l, u) = (v(&[-1.0, 0.5, 2.0]), v(&[0.0, 3.0, 2.5]));
        let ball = ball_from_box(&l, &u).unwrap();
        for mask in 0..8u32 {
            let corner = Vector::from_fn(3, |j, _| if mask >> j & 1 == 1 { u[j] } else { l[j] });
            assert!((corner - ball.center()).norm() <= ball.radius() / 2.0 + 1e-12);
        }
    }
}
