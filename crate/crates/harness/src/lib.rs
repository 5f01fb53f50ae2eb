//! Verification harness for the Finsler-metric toolkit: named experiment
//! suites with machine-readable reports, plus the command-line front end.

pub mod cli;
pub mod config;
pub mod coverage;
pub mod report;
pub mod suites;
pub mod tolerances;

pub use config::ExperimentConfig;
pub use report::{CheckResult, ReportValue, VerificationReport};
pub use suites::{run_all, run_suite, SUITE_NAMES};
