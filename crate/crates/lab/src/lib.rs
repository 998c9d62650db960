//! Experiment harness for the EDCS protocol: JSON configs, seeded parallel
//! trials, oracle suites, communication sweeps, and self-checking reports.

pub mod cli;
pub mod config;
pub mod error;
pub mod report;
pub mod run;
pub mod stats;
pub mod sweep;
pub mod verify;

pub use config::{ExperimentConfig, InstanceSource, VerifierKind};
pub use error::LabError;
pub use report::SummaryReport;
pub use run::run_experiment;
pub use sweep::sweep_experiment;
pub use verify::verify_experiment;
