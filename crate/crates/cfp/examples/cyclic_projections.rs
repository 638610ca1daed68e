//! Cyclic subgradient projections (CSP) on a disk cut by two half-planes.

use cfp::solver::{run, SolverConfig};
use cfp::{ConstraintFunction, Matrix, Problem, Vector};

fn main() -> cfp::Result<()> {
    let disk = ConstraintFunction::quadratic(Matrix::identity(2, 2), Vector::zeros(2), -4.0)?;
    let right = ConstraintFunction::affine(Vector::from_vec(vec![-1.0, 0.0]), 1.0)?; // x >= 1
    let up = ConstraintFunction::affine(Vector::from_vec(vec![0.0, -1.0]), 0.5)?; // y >= 0.5
    let problem = Problem::new(vec![disk, right, up])?;

    for alpha in [0.5, 1.0, 1.9] {
        let cfg = SolverConfig::csp(alpha).with_max_iter(500).with_eps_feas(1e-9);
        let (trace, out) = run(&problem, &Vector::from_vec(vec![-5.0, -5.0]), &cfg).map_err(|e| e.error)?;
        println!(
            "alpha = {alpha}: {} after {} sweeps, x = ({:.6}, {:.6}), f = {:.3e}, path length {:.4}",
            out.termination,
            out.iterations_used,
            out.final_x[0],
            out.final_x[1],
            out.final_f,
            trace.last().unwrap().s_k
        );
    }
    Ok(())
}
