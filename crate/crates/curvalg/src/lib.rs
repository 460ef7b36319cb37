//! Operator files, verification reports and the `curvalg` command line.

pub mod cli;
pub mod format;
pub mod report;
pub mod suites;
