//! Declarative experiment specs, their validation and execution.

pub mod catalog;
pub mod run;
pub mod spec;
pub mod validate;

pub use run::{run_file, run_spec, RunError, RunOptions, RunOutput};
pub use spec::{Experiment, ExperimentSpec, SCHEMA_VERSION};
pub use validate::{validate, validate_text, Report};
