//! Experiment spec files, the built-in prisoner's dilemma corpus, the
//! reproduction report and CSV output for the `qlid` command line.

pub mod dataset;
pub mod error;
pub mod record;
pub mod report;
pub mod spec_file;
pub mod table;

pub use error::{HarnessError, Result};
pub use record::{ExperimentRecord, Payoffs};
pub use report::{reproduce, ReproduceOptions, RunReport, Verdict};
pub use spec_file::{emit_spec, load_record, load_spec, parse_spec, write_spec};
