//! Verification runs, truncation sweeps and demos behind the command line.

mod builtins;
mod config;
mod demo;
mod tables;
mod verify;

pub use builtins::{
    anharmonic_action, crossing_loop, harmonic_action, kinked, kinked_atlases, map_at, rotation, rough_multiplier,
    sample_loops, shear, smooth_multiplier, SAMPLE_TRUNCATION,
};
pub use config::{workers_from_env, RunConfig, Suite, Tolerances, WORKERS_ENV};
pub use demo::{run_demo, DEMOS};
pub use tables::{run_sweep, to_csv, SweepRow};
pub use verify::{run_suite, run_verify, CheckResult, Expect, SuiteReport, VerifyReport};
