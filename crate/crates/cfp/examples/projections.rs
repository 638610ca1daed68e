//! Exact projections onto half-spaces, boxes and quadratic sublevel sets, and
//! the proximity function built from them.

use cfp::projection::{project_box, project_halfspace, project_onto, proximity, uniform_weights};
use cfp::{ConstraintFunction, Matrix, Problem, Vector};

fn main() -> cfp::Result<()> {
    let z = Vector::from_vec(vec![3.0, 2.0]);
    let a = Vector::from_vec(vec![1.0, 1.0]);
    println!("half-space x + y <= 1: {:?}", project_halfspace(&a, -1.0, &z)?.as_slice());
    let (lo, hi) = (Vector::from_vec(vec![-1.0, -1.0]), Vector::from_vec(vec![1.0, 1.0]));
    println!("box [-1, 1]^2:         {:?}", project_box(&lo, &hi, &z)?.as_slice());

    let ellipse = ConstraintFunction::quadratic(Matrix::from_row_slice(2, 2, &[4.0, 0.0, 0.0, 1.0]), Vector::zeros(2), -4.0)?;
    let p = project_onto(&ellipse, &z)?;
    println!("ellipse 4x^2 + y^2 <= 4: {:?} (f = {:.2e})", p.as_slice(), ellipse.evaluate(&p)?);

    let problem = Problem::new(vec![ellipse, ConstraintFunction::affine(a, -1.0)?])?;
    let w = uniform_weights(problem.len());
    for x in [z, Vector::from_vec(vec![0.2, 0.2])] {
        println!("proximity at {:?} = {:.6}", x.as_slice(), proximity(&problem, &w, &x)?);
    }
    Ok(())
}
