//! File formats, report rendering and command implementations for the
//! `propid` command-line tool.

pub mod commands;
pub mod error;
pub mod files;
pub mod report;

pub use error::Failure;
