//! Command-line driver for `topo-core`: subcommands, JSON formats, seeded
//! fuzzers and the acceptance suite.

pub mod acceptance;
pub mod commands;
pub mod fuzz;
pub mod json;
