//! Library side of the `wittenloc` command-line tool.

pub mod commands;
pub mod complex;
pub mod manifest;
pub mod report;
