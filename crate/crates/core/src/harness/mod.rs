//! Run driver and diagnostics behind the command-line interface.

pub mod analysis;
pub mod config;
pub mod run;

pub use analysis::{
    convergence_study, drift_report, estimate_period, increment_sign_changes, reversal_test,
    ConvergenceRow, ConvergenceTable, DriftReport, InvariantDrift,
};
pub use config::{Model, Params, RunConfig, Scheme, DEFAULT_STRIDE};
pub use run::{run, sample_invariants, step, Sample, Trajectory, BODY_HEADER, LAGRANGE_HEADER};
