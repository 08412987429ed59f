//! File formats, verification suites and subcommands behind the `cvac`
//! binary.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod formats;
pub mod report;
pub mod sampling;
pub mod suites;

pub use config::{resolve, ConfigFile, Format, Overrides, Suite, SuiteConfig};
pub use formats::MapSpec;
pub use report::{Bound, Check, SuiteReport};
pub use suites::run_suite;
