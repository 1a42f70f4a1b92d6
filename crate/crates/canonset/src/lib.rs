//! File formats, solver backends and the command line for `canonset-core`.

pub mod cli;
pub mod dimacs;
pub mod error;
pub mod graph6;
pub mod permfile;
pub mod pipeline;
pub mod report;
pub mod solver;
pub mod spec;

pub use error::{Error, Result};
