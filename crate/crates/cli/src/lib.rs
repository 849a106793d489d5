//! Configuration-driven verification runner: parses a job description,
//! runs the selected identity suites against the library, and renders a
//! deterministic report.

pub mod config;
pub mod report;
pub mod suites;

pub use config::{load_job, parse_job, ConfigError, Job};
pub use report::{CheckRecord, Report, Status};
pub use suites::{run_suite, run_suites, Suite};
