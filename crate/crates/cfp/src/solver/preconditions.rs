//! Checks whether `(x0, r, M)` put the strategic method in its convergent
//! regime: `M` bounds the Lipschitz constant of `f` over `B(x0, r)`, and
//! either `B(x0, r/2)` meets the interior of the feasible set or `f` is
//! strictly convex, with `B(x0, r/2)` meeting the feasible set.

use crate::error::{CfpError, Result};
use crate::function::{check_dim, Vector};
use crate::lipschitz::{lipschitz_bound, BallSpec};
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionStatus {
    Holds,
    Fails,
    /// No feasible point was supplied to certify it.
    Unverifiable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PreconditionReport {
    pub lipschitz_bound: f64,
    pub m_sufficient: bool,
    /// `max(0, L - M)`
    pub deficit: f64,
    /// Every function is a quadratic with positive definite `U`.
    pub strictly_convex: bool,
    /// A feasible point lies in `B(x0, r/2)`.
    pub ball_meets_feasible_set: ConditionStatus,
    /// A strictly feasible point lies in `B(x0, r/2)`.
    pub ball_meets_interior: ConditionStatus,
}

impl PreconditionReport {
    /// All conditions are certified.
    pub fn guarantees_convergence(&self) -> bool {
        self.m_sufficient
            && self.ball_meets_feasible_set == ConditionStatus::Holds
            && (self.strictly_convex || self.ball_meets_interior == ConditionStatus::Holds)
    }
}

/// `feasible_point`, when known, certifies the ball conditions.
pub fn check_theorem_preconditions(
    problem: &Problem,
    x0: &Vector,
    r: f64,
    m_bound: f64,
    feasible_point: Option<&Vector>,
) -> Result<PreconditionReport> {
    let ball = BallSpec::new(x0.clone(), r)?;
    let lipschitz = lipschitz_bound(problem, &ball)?;
    let strictly_convex = problem.functions().iter().all(|f| f.is_strictly_convex());
    let (meets, interior) = match feasible_point {
        None => (ConditionStatus::Unverifiable, ConditionStatus::Unverifiable),
        Some(z) => {
            check_dim(problem.dimension(), z)?;
            let env = problem.envelope(z)?;
            if env.value > 0.0 {
                return Err(CfpError::InvalidParameter(format!(
                    "supplied point is not feasible (f = {})",
                    env.value
                )));
            }
            if (z - x0).norm() > 0.5 * r {
                // z says nothing about other feasible points
                (ConditionStatus::Unverifiable, ConditionStatus::Unverifiable)
            } else if env.value < 0.0 {
                (ConditionStatus::Holds, ConditionStatus::Holds)
            } else {
                (ConditionStatus::Holds, ConditionStatus::Unverifiable)
            }
        }
    };
    Ok(PreconditionReport {
        lipschitz_bound: lipschitz,
        m_sufficient: m_bound >= lipschitz,
        deficit: (lipschitz - m_bound).max(0.0),
        strictly_convex,
        ball_meets_feasible_set: meets,
        ball_meets_interior: interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{ConstraintFunction, FnOracle, Matrix};
    use std::sync::Arc;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn affine_with_max_normal_norm_is_sufficient() {
        let p = Problem::new(vec![
            ConstraintFunction::affine(v(&[3.0, 4.0]), -1.0).unwrap(),
            ConstraintFunction::affine(v(&[1.0, 0.0]), -1.0).unwrap(),
        ])
        .unwrap();
        let r = check_theorem_preconditions(&p, &v(&[0.0, 0.0]), 2.0, 5.0, None).unwrap();
        assert!(r.m_sufficient);
        assert_eq!(r.deficit, 0.0);
        assert!(!r.strictly_convex);
        assert_eq!(r.ball_meets_feasible_set, ConditionStatus::Unverifiable);
        assert!(!r.guarantees_convergence());

        let r = check_theorem_preconditions(&p, &v(&[0.0, 0.0]), 2.0, 5.0, Some(&v(&[0.0, 0.0]))).unwrap();
        assert_eq!(r.ball_meets_interior, ConditionStatus::Holds);
        assert!(r.guarantees_convergence());
    }

    #[test]
    fn undersized_m_reports_deficit() {
        let q = ConstraintFunction::quadratic(Matrix::identity(2, 2), v(&[0.0, 0.0]), -1.0).unwrap();
        let p = Problem::new(vec![q]).unwrap();
        let required = 2.0 * 1.0 * (0.0 + 3.0);
        let r = check_theorem_preconditions(&p, &v(&[0.0, 0.0]), 3.0, 0.5 * required, None).unwrap();
        assert!(!r.m_sufficient);
        assert!((r.deficit - 0.5 * required).abs() < 1e-12);
        assert!(r.strictly_convex);
    }

    #[test]
    fn custom_and_infeasible_points_are_rejected() {
        let p = Problem::new(vec![ConstraintFunction::custom(Arc::new(FnOracle::new(
            1,
            |x: &Vector| x[0],
            |_: &Vector| v(&[1.0]),
        )))])
        .unwrap();
        assert!(matches!(
            check_theorem_preconditions(&p, &v(&[0.0]), 1.0, 1.0, None),
            Err(CfpError::Unsupported(_))
        ));
        let q = Problem::new(vec![ConstraintFunction::affine(v(&[1.0]), -1.0).unwrap()]).unwrap();
        assert!(check_theorem_preconditions(&q, &v(&[0.0]), 1.0, 1.0, Some(&v(&[3.0]))).is_err());
    }
}
