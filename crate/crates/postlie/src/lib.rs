//! Std companion to `postlie-core`: JSON and CSV formats, named r-matrix
//! structures, seeded property suites, and the `postlie` command line.

pub mod cli;
pub mod io;
pub mod structures;
pub mod suites;

pub use postlie_core as core;
