pub mod config;
pub mod lemmas;
pub mod report;
pub mod run;
pub mod tabulate;

pub use config::{ConfigError, DomainSpec, ExperimentConfig, Family};
pub use run::{run, RunOptions, RunReport};

/// Process exit codes.
pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
