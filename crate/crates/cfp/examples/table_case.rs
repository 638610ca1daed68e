//! Runs one row of the experiment table and plots the traces.
//!
//! `cargo run --release --example table_case -- 3 7 out/`

use std::path::PathBuf;

use cfp::bench::{emit_plot, run_case, BenchOptions, CaseConfig, DEFAULT_SOLVERS};

fn main() -> cfp::Result<()> {
    let mut args = std::env::args().skip(1);
    let case_id: u32 = args.next().map_or(3, |a| a.parse().expect("case id"));
    let seed: u64 = args.next().map_or(7, |a| a.parse().expect("seed"));
    let out: PathBuf = args.next().map_or_else(|| std::env::temp_dir().join("cfp-case"), PathBuf::from);

    let case = CaseConfig::table(case_id)?;
    let summary = run_case(&case, seed, &DEFAULT_SOLVERS, &out, &BenchOptions::default())?;
    println!("case {case_id}: param {}, n = {}, M = {:.4e}", case.param, case.n, summary.lipschitz);
    for r in &summary.runs {
        println!("  {:<13} {:<18} k = {:<6} f = {:.4e}", r.solver, r.termination, r.iterations, r.final_f);
    }
    let traces: Vec<&str> = summary.runs.iter().map(|r| r.trace.as_str()).collect();
    let svg = out.join(format!("case{case_id}.svg"));
    emit_plot(&traces, &svg, true)?;
    println!("plot: {}", svg.display());
    Ok(())
}
