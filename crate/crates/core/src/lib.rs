//! Exact-arithmetic simulator for computation systems driven by rule-based
//! programs, with timed measurements and advice encodings.

pub mod advice;
pub mod classical;
pub mod dsl;
pub mod error;
pub mod gallery;
pub mod machine;
pub mod numerics;
pub mod timed;

pub use error::{Error, Result};
