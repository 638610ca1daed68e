//! Head-to-head benchmark of the simultaneous, steering and strategic
//! methods on seeded random problems, with CSV traces and SVG plots.

mod cases;
mod plot;

pub use cases::{
    run_case, solver_config, trace_file_name, BenchOptions, CaseConfig, CaseSummary, SolverSummary, CASES,
    DEFAULT_SOLVERS,
};
pub use plot::{emit_plot, render_svg, Series};
