//! `f(x) = e^{-x}` has no feasible point, yet the strategic method drives
//! `f(x^k)` to zero: a vanishing envelope value alone does not certify
//! feasibility.

use std::sync::Arc;

use cfp::solver::{run, SolverConfig};
use cfp::{ConstraintFunction, FnOracle, Problem, Vector};

fn main() -> cfp::Result<()> {
    let f = ConstraintFunction::custom(Arc::new(FnOracle::new(
        1,
        |x: &Vector| (-x[0]).exp(),
        |x: &Vector| Vector::from_element(1, -(-x[0]).exp()),
    )));
    let problem = Problem::new(vec![f])?;
    let cfg = SolverConfig::strategic(1.0, 1.5).with_max_iter(100_000).with_eps_step(0.0);
    let (trace, out) = run(&problem, &Vector::zeros(1), &cfg).map_err(|e| e.error)?;
    for k in [0, 1, 10, 100, 1000, 10_000, 99_999] {
        let row = &trace.rows()[k];
        println!("k = {k:>6}  x = {:>8.4}  f = {:.3e}  lambda = {:.3e}", row.x[0], row.f_val, row.relax);
    }
    println!("classification: {}", out.classification);
    Ok(())
}
