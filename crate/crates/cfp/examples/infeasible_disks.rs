//! Two disjoint unit disks at (+-2, 0). The envelope is strictly convex and
//! its minimizer (the origin, f = 3) is what the strategic method finds.

use cfp::solver::{run, SolverConfig};
use cfp::{lipschitz_bound, BallSpec, ConstraintFunction, Matrix, Problem, Vector};

fn disk(cx: f64) -> cfp::Result<ConstraintFunction> {
    ConstraintFunction::quadratic(Matrix::identity(2, 2), Vector::from_vec(vec![-2.0 * cx, 0.0]), cx * cx - 1.0)
}

fn main() -> cfp::Result<()> {
    let problem = Problem::new(vec![disk(2.0)?, disk(-2.0)?])?;
    for (x0, r) in [(vec![0.0, 1.0], 2.0), (vec![0.5, 1.0], 100.0)] {
        let x0 = Vector::from_vec(x0);
        let m = lipschitz_bound(&problem, &BallSpec::new(x0.clone(), r)?)?;
        let cfg = SolverConfig::strategic(m, 1.0).with_max_iter(100_000);
        let (trace, out) = run(&problem, &x0, &cfg).map_err(|e| e.error)?;
        println!(
            "x0 = ({}, {}), M = {m}: {} after {} iterations, |x| = {:.2e}, f = {:.6}, S_k = {:.4}, {}",
            x0[0],
            x0[1],
            out.termination,
            out.iterations_used,
            out.final_x.norm(),
            out.final_f,
            trace.last().unwrap().s_k,
            out.classification
        );
    }
    Ok(())
}
