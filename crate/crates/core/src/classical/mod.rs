//! Polynomial maps with rational exponents, measurable sets and partitions.

pub mod partition;
pub mod piecewise;
pub mod poly;
pub mod set;

pub use partition::{validate_partition, ExtReal, Partition, PartitionReport, Violation, ViolationKind};
pub use piecewise::PiecewiseMap;
pub use poly::{exact_point, ClassicalMap, MultiPoly, Point, Term};
pub use set::SetExpr;
