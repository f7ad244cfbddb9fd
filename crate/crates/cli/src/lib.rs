//! Command-line harness for the `stsdisc` experiments: report types, table
//! rendering, experiment runners and the acceptance checks.

pub mod checks;
pub mod commands;
pub mod render;
pub mod report;
