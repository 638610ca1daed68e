//! Seeded random problems and their JSON form.

use cfp::io::{problem_from_json, problem_to_json};
use cfp::probgen::{generate_quadratic, substream};
use cfp::{generate_problem, RandomProblemSpec};

fn main() -> cfp::Result<()> {
    let spec = RandomProblemSpec::new(3, 2, 2, [-10.0, 10.0], 7);
    let problem = generate_problem(&spec)?;
    println!(
        "n = {}, {} functions ({} counting the box as n)",
        problem.dimension(),
        problem.len(),
        problem.reported_constraint_count()
    );

    // the first quadratic, rebuilt from its own substream
    let q = generate_quadratic(&spec, &mut substream(spec.seed, 1))?;
    println!("eigenvalues of U_1: {:?}", q.eigenvalues.as_slice());
    assert_eq!(&q.function, &problem.functions()[2 * spec.n]);

    let json = problem_to_json(&problem)?;
    let back = problem_from_json(&json)?;
    assert_eq!(back.functions(), problem.functions());
    println!("{json}");
    Ok(())
}
