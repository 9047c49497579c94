//! Scheduling reductions with exact validators, solvers and generators.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod generators;
pub mod model;
pub mod rational;
pub mod reductions;
pub mod rounding;
pub mod solvers;

pub use error::{Error, Result};
