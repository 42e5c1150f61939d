//! Configuration, instance generation, suite orchestration and reporting
//! for the `r2pencil` verification harness.

pub mod config;
pub mod instance;
pub mod report;
pub mod suites;

pub use config::{load_config, parse_config, Backend, ConfigError, RunConfig, SuiteSelection};
pub use instance::{gen_instance, Instance, InstanceError};
pub use report::{emit_report, Format, VerificationReport};
pub use suites::run_suites;
