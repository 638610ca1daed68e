//! Simultaneous projections with a constant relaxation against the steering
//! variant `sigma_k = sigma / (k + 1)`.

use cfp::solver::{run, SolverConfig, WeightPolicy};
use cfp::{ConstraintFunction, Matrix, Problem, Vector};

fn main() -> cfp::Result<()> {
    let u = Matrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
    let ellipse = ConstraintFunction::quadratic(u, Vector::from_vec(vec![-1.0, 0.0]), -1.0)?;
    let slab = ConstraintFunction::affine(Vector::from_vec(vec![1.0, -1.0]), -0.2)?;
    let problem = Problem::new(vec![ellipse, slab])?;
    let x0 = Vector::from_vec(vec![4.0, -3.0]);

    let configs = [
        ("ssp alpha=1", SolverConfig::ssp(1.0)),
        ("ssp alpha=1.8", SolverConfig::ssp(1.8)),
        ("ssp weights 0.8/0.2", SolverConfig::ssp(1.0).with_weights(WeightPolicy::Fixed(vec![0.8, 0.2]))),
        ("steering sigma=0.9", SolverConfig::steering(0.9)),
    ];
    for (label, cfg) in configs {
        let cfg = cfg.with_max_iter(2000).with_eps_feas(1e-6).with_proximity(true);
        let (trace, out) = run(&problem, &x0, &cfg).map_err(|e| e.error)?;
        let prox = trace.last().and_then(|r| r.proximity).unwrap_or(f64::NAN);
        println!(
            "{label:<22} {:<18} k = {:<5} f = {:<10.3e} proximity = {prox:.3e}",
            out.termination.to_string(),
            out.iterations_used,
            out.final_f
        );
    }
    Ok(())
}
