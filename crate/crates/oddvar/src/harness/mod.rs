//! Monte Carlo experiment driver, statistical checks and the acceptance suites.

pub mod checks;
pub mod config;
pub mod experiment;
pub mod report;
pub mod suites;

pub use checks::{l2_endpoint_test, mixture_law_test, moment_scaling_test};
pub use config::{ExperimentConfig, StatisticId, Thresholds};
pub use experiment::run_experiment;
pub use report::{McReport, TestOutcome, VERSION};
pub use suites::{run_suite, SuiteId, SuiteOutcome, SuiteSettings};
