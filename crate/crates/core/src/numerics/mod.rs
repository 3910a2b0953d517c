//! Exact rationals, digit-stream reals and certified comparison.

pub mod interval;
pub mod rational;
pub mod real;
pub mod stream;

use std::sync::atomic::{AtomicU32, Ordering};

pub use interval::Interval;
pub use rational::{int, rat, Rational};
pub use real::{cmp, rat_pow, LazyReal, RealOrdering, RealValue};
pub use stream::{DigitFn, DigitSource, StreamReal};

pub const DEFAULT_PRECISION_CAP: u32 = 4096;

static PRECISION_CAP: AtomicU32 = AtomicU32::new(DEFAULT_PRECISION_CAP);

/// Maximum refinement depth used by comparisons that have no explicit budget.
pub fn precision_cap() -> u32 {
    PRECISION_CAP.load(Ordering::Relaxed)
}

pub fn set_precision_cap(cap: u32) {
    PRECISION_CAP.store(cap, Ordering::Relaxed);
}
