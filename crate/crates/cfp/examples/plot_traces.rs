//! Renders traces from several solvers into one SVG chart.

use cfp::bench::{render_svg, Series};
use cfp::solver::{run, SolverConfig};
use cfp::{ConstraintFunction, Problem, Vector};

fn main() -> cfp::Result<()> {
    let problem = Problem::new(vec![
        ConstraintFunction::affine(Vector::from_vec(vec![1.0, 2.0]), -1.0)?,
        ConstraintFunction::affine(Vector::from_vec(vec![-1.0, 0.5]), -0.5)?,
    ])?;
    let x0 = Vector::from_vec(vec![10.0, 10.0]);
    let mut series = Vec::new();
    for (label, cfg) in [
        ("csp", SolverConfig::csp(1.0)),
        ("ssp", SolverConfig::ssp(1.0)),
        ("steering", SolverConfig::steering(0.9)),
        ("strategic", SolverConfig::strategic(2.5, 1.5)),
    ] {
        let (trace, _) = run(&problem, &x0, &cfg.with_max_iter(60)).map_err(|e| e.error)?;
        series.push(Series {
            label: label.into(),
            points: trace.rows().iter().map(|r| (r.k as f64, r.f_val)).collect(),
        });
    }
    let path = std::env::temp_dir().join("cfp-traces.svg");
    std::fs::write(&path, render_svg(&series, true)?)?;
    println!("wrote {}", path.display());
    Ok(())
}
