//! Degree growth of the matrix-inversion / Hadamard-inverse composition.

pub mod arith;
pub mod charts;
pub mod cli;
pub mod degree;
pub mod error;
pub mod maps;
pub mod picard;

pub use error::{Error, Result};
