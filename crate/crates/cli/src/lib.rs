//! File formats, configuration, solver integration and the scenario
//! commands behind the `greenvod` binary.

pub mod config;
pub mod formats;
pub mod pipeline;
pub mod solver;
pub mod commands;
