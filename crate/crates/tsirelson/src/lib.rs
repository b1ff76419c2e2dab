//! File formats, reports and the command-line front end for `tsirelson-core`.

pub mod cli;
pub mod report;
pub mod vector_io;
