//! Choosing `x0`, `r` and `M` from a box, then checking which convergence
//! conditions can be certified.

use cfp::solver::check_theorem_preconditions;
use cfp::{ball_from_box, lipschitz_bound, lipschitz_constants, BoxBounds, ConstraintFunction, Matrix, Problem, Vector};

fn main() -> cfp::Result<()> {
    let bounds = BoxBounds::new(Vector::from_vec(vec![-1.0, 0.0, -2.0]), Vector::from_vec(vec![2.0, 1.0, 1.0]))?;
    let q = ConstraintFunction::quadratic(
        Matrix::from_row_slice(3, 3, &[2.0, 0.3, 0.0, 0.3, 1.0, 0.0, 0.0, 0.0, 0.5]),
        Vector::from_vec(vec![0.5, -1.0, 0.0]),
        -2.0,
    )?;
    let h = ConstraintFunction::affine(Vector::from_vec(vec![1.0, 1.0, 1.0]), -1.0)?;
    let problem = Problem::with_box(bounds.clone(), vec![q, h])?;

    let ball = ball_from_box(bounds.lower(), bounds.upper())?;
    println!("x0 = {:?}, r = {:.4}", ball.center().as_slice(), ball.radius());
    let per_function = lipschitz_constants(&problem, &ball)?;
    println!("L_i = {:?}", per_function.iter().map(|l| format!("{l:.3}")).collect::<Vec<_>>());
    let m = lipschitz_bound(&problem, &ball)?;
    println!("M = {m:.4}");

    let origin = Vector::zeros(3);
    let report = check_theorem_preconditions(&problem, ball.center(), ball.radius(), m, Some(&origin))?;
    println!("{report:#?}");
    println!("guaranteed convergence: {}", report.guarantees_convergence());
    Ok(())
}
