//! Iterative methods: cyclic and simultaneous subgradient projections,
//! simultaneous projections with steering, and strategic relaxation.

mod config;
mod preconditions;
mod run;
mod steering;
mod steps;
mod trace;

pub use config::{Algorithm, SolverConfig, WeightPolicy};
pub use preconditions::{check_theorem_preconditions, ConditionStatus, PreconditionReport};
pub use run::{
    classify_outcome, run, Classification, RunAborted, RunOutcome, Termination, DEFAULT_STAB_TOL,
    DEFAULT_WINDOW, DIVERGENCE_NORM,
};
pub use steering::{validate_steering_sequence, SteeringReport};
pub use steps::{csp_step, ssp_step, ssp_steering_step, steering_term, strategic_step, StrategicStep};
pub use trace::{read_csv, CsvRow, IterateTrace, TraceRow, CSV_HEADER};
