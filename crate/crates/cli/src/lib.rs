//! Command-line front end for the rbflow numerical core: scenario
//! configuration, batch execution, and bit-stable data export.

pub mod config;
pub mod error;
pub mod output;
pub mod runner;
pub mod scene;
