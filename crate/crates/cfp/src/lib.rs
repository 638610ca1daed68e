//! Subgradient projection methods for convex feasibility problems.
//!
//! A [`Problem`] is a finite family of convex functions `f_i`; the goal is a
//! point with `f_i(x) <= 0` for every `i`. The [`solver`] module provides the
//! cyclic (CSP) and simultaneous (SSP) subgradient projection methods, SSP
//! with a steering sequence, and a strategic relaxation method that keeps a
//! bounded, Fejér monotone sequence and distinguishes a feasible point from
//! a minimizer of the max-envelope when the problem is infeasible.
//!
//! ```
//! use cfp::{ConstraintFunction, Problem, Vector};
//! use cfp::solver::{run, SolverConfig};
//!
//! let f = ConstraintFunction::affine(Vector::from_vec(vec![-1.0, 0.0]), 1.0).unwrap();
//! let g = ConstraintFunction::affine(Vector::from_vec(vec![0.0, -1.0]), 1.0).unwrap();
//! let problem = Problem::new(vec![f, g]).unwrap();
//! let (_, outcome) = run(&problem, &Vector::zeros(2), &SolverConfig::csp(1.0)).unwrap();
//! assert!(problem.is_feasible(&outcome.final_x).unwrap());
//! ```

// `!(x > 0.0)` guards are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod error;
pub mod function;
pub mod io;
pub mod lipschitz;
pub mod probgen;
pub mod problem;
pub mod projection;
pub mod solver;

pub use error::{CfpError, Result};
pub use function::{ConstraintFunction, FnOracle, Matrix, SubgradientOracle, Vector};
pub use lipschitz::{ball_from_box, lipschitz_bound, lipschitz_constants, BallSpec};
pub use probgen::{generate_problem, RandomProblemSpec};
pub use problem::{BoxBounds, EnvelopeEvaluation, Problem};
