//! Compiling single-qubit gates into Fibonacci-anyon braids by hashing them
//! through the icosahedral group.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod braid;
pub mod compiler;
pub mod error;
pub mod icosa;
pub mod pseudo;
pub mod search;
pub mod stats;
pub mod su2;

pub use error::{Error, Result};
