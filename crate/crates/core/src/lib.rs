//! Symmetric cycles in the hypercube: decompositions of topes, Smirnov-word
//! counting kernels, and enumerative statistics for pairs of vertex sets.

pub mod cli;
pub mod counting;
pub mod cycle;
pub mod error;
pub mod family;
pub mod hypercube;
pub mod identities;
pub mod linalg;
pub mod pairs;

pub use error::{Error, Result};
