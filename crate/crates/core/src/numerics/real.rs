//! Uniform coordinate type: exact rationals, digit streams, and lazily
//! evaluated combinations of them.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::interval::Interval;
use super::rational::{self, magnitude_bits, pow_i64, root_bounds, Rational};
use super::stream::StreamReal;
use super::precision_cap;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum RealValue {
    Exact(Rational),
    Stream(StreamReal),
    Lazy(Arc<LazyReal>),
}

/// Deferred arithmetic over non-exact operands. Every node can produce a
/// rational enclosure at any requested depth.
#[derive(Debug, PartialEq)]
pub enum LazyReal {
    Affine {
        scale: Rational,
        offset: Rational,
        inner: RealValue,
    },
    Sum(RealValue, RealValue),
    Product(RealValue, RealValue),
    /// Greatest real root; the radicand is known non-negative for even indices.
    Root { radicand: RealValue, index: u32 },
    /// Reciprocal of an operand known to be non-zero.
    Recip(RealValue),
    Abs(RealValue),
    Min(RealValue, RealValue),
    Max(RealValue, RealValue),
}

/// Result of comparing two reals under a refinement budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RealOrdering {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl RealOrdering {
    pub fn reverse(self) -> Self {
        match self {
            RealOrdering::Less => RealOrdering::Greater,
            RealOrdering::Greater => RealOrdering::Less,
            other => other,
        }
    }
}

impl From<Ordering> for RealOrdering {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => RealOrdering::Less,
            Ordering::Equal => RealOrdering::Equal,
            Ordering::Greater => RealOrdering::Greater,
        }
    }
}

/// Depths tried by comparisons: 0, 1, 2, 4, ... and finally the budget itself.
pub fn depth_schedule(budget: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let d = next?;
        next = if d >= budget {
            None
        } else {
            let doubled = if d == 0 { 1 } else { d.saturating_mul(2) };
            Some(doubled.min(budget))
        };
        Some(d)
    })
}

impl RealValue {
    pub fn zero() -> Self {
        RealValue::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        RealValue::Exact(Rational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        RealValue::Exact(rational::int(v))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        RealValue::Exact(rational::rat(n, d))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            RealValue::Exact(r) => Some(r),
            _ => None,
        }
    }

    /// The value as a rational when it is known exactly, including streams
    /// with an eventually periodic digit source.
    pub fn exact_value(&self) -> Option<Rational> {
        match self {
            RealValue::Exact(r) => Some(r.clone()),
            RealValue::Stream(s) => s.exact_value(),
            RealValue::Lazy(_) => None,
        }
    }

    fn lazy(node: LazyReal) -> Self {
        RealValue::Lazy(Arc::new(node))
    }

    /// Rational enclosure whose width tends to zero as `depth` grows.
    /// `None` when this depth is too shallow to bound a reciprocal.
    pub fn enclose(&self, depth: u32) -> Option<Interval> {
        match self {
            RealValue::Exact(r) => Some(Interval::point(r.clone())),
            RealValue::Stream(s) => Some(match s.exact_value() {
                Some(v) => Interval::point(v),
                None => s.refine(depth),
            }),
            RealValue::Lazy(node) => node.enclose(depth),
        }
    }

    fn coarse_magnitude(&self, depth: u32) -> Option<u32> {
        let e = self.enclose(depth.min(8))?;
        Some(magnitude_bits(e.lo()).max(magnitude_bits(e.hi())))
    }

    pub fn affine(&self, scale: &Rational, offset: &Rational) -> RealValue {
        match self {
            RealValue::Exact(r) => RealValue::Exact(r * scale + offset),
            _ if scale.is_zero() => RealValue::Exact(offset.clone()),
            RealValue::Lazy(node) => match node.as_ref() {
                LazyReal::Affine {
                    scale: s0,
                    offset: o0,
                    inner,
                } => {
                    let s = s0 * scale;
                    let o = o0 * scale + offset;
                    if s.is_one() && o.is_zero() {
                        inner.clone()
                    } else {
                        RealValue::lazy(LazyReal::Affine {
                            scale: s,
                            offset: o,
                            inner: inner.clone(),
                        })
                    }
                }
                _ => self.wrap_affine(scale, offset),
            },
            RealValue::Stream(_) => self.wrap_affine(scale, offset),
        }
    }

    fn wrap_affine(&self, scale: &Rational, offset: &Rational) -> RealValue {
        if scale.is_one() && offset.is_zero() {
            return self.clone();
        }
        RealValue::lazy(LazyReal::Affine {
            scale: scale.clone(),
            offset: offset.clone(),
            inner: self.clone(),
        })
    }

    pub fn add(&self, other: &RealValue) -> RealValue {
        match (self, other) {
            (RealValue::Exact(a), RealValue::Exact(b)) => RealValue::Exact(a + b),
            (RealValue::Exact(a), x) | (x, RealValue::Exact(a)) => x.affine(&Rational::one(), a),
            (a, b) => RealValue::lazy(LazyReal::Sum(a.clone(), b.clone())),
        }
    }

    pub fn neg(&self) -> RealValue {
        self.affine(&-Rational::one(), &Rational::zero())
    }

    pub fn sub(&self, other: &RealValue) -> RealValue {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RealValue) -> RealValue {
        match (self, other) {
            (RealValue::Exact(a), RealValue::Exact(b)) => RealValue::Exact(a * b),
            (RealValue::Exact(k), x) | (x, RealValue::Exact(k)) => x.affine(k, &Rational::zero()),
            (a, b) => RealValue::lazy(LazyReal::Product(a.clone(), b.clone())),
        }
    }

    pub fn abs(&self) -> RealValue {
        match self {
            RealValue::Exact(r) => RealValue::Exact(r.abs()),
            x => RealValue::lazy(LazyReal::Abs(x.clone())),
        }
    }

    pub fn min(&self, other: &RealValue) -> RealValue {
        match (self, other) {
            (RealValue::Exact(a), RealValue::Exact(b)) => RealValue::Exact(a.min(b).clone()),
            (a, b) => RealValue::lazy(LazyReal::Min(a.clone(), b.clone())),
        }
    }

    pub fn max(&self, other: &RealValue) -> RealValue {
        match (self, other) {
            (RealValue::Exact(a), RealValue::Exact(b)) => RealValue::Exact(a.max(b).clone()),
            (a, b) => RealValue::lazy(LazyReal::Max(a.clone(), b.clone())),
        }
    }

    /// Sign under the global precision cap.
    pub fn signum(&self) -> Result<RealOrdering> {
        match cmp(self, &RealValue::zero(), precision_cap()) {
            RealOrdering::Undecided => Err(Error::exhausted(precision_cap(), "sign of a real")),
            o => Ok(o),
        }
    }

    pub fn recip(&self) -> Result<RealValue> {
        match self {
            RealValue::Exact(r) if r.is_zero() => Err(Error::DivisionByZero),
            RealValue::Exact(r) => Ok(RealValue::Exact(r.recip())),
            x => match x.signum()? {
                RealOrdering::Equal => Err(Error::DivisionByZero),
                _ => match x.exact_value() {
                    Some(v) => Ok(RealValue::Exact(v.recip())),
                    None => Ok(RealValue::lazy(LazyReal::Recip(x.clone()))),
                },
            },
        }
    }

    pub fn div(&self, other: &RealValue) -> Result<RealValue> {
        Ok(self.mul(&other.recip()?))
    }

    /// Integer power; `0^n` for negative `n` is undefined.
    pub fn powi(&self, exp: i64) -> Result<RealValue> {
        if let RealValue::Exact(r) = self {
            return pow_i64(r, exp)
                .map(RealValue::Exact)
                .ok_or_else(|| Error::Undefined("zero raised to a negative power".into()));
        }
        let base = if exp < 0 {
            self.recip().map_err(|e| match e {
                Error::DivisionByZero => Error::Undefined("zero raised to a negative power".into()),
                other => other,
            })?
        } else {
            self.clone()
        };
        let mut n = exp.unsigned_abs();
        let mut acc = RealValue::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(acc)
    }

    /// Greatest real `index`-th root.
    pub fn root(&self, index: u32) -> Result<RealValue> {
        if index == 0 {
            return Err(Error::InvalidParameter("root index must be positive".into()));
        }
        if index == 1 {
            return Ok(self.clone());
        }
        if let Some(v) = self.exact_value() {
            if v.is_negative() && index % 2 == 0 {
                return Err(Error::Undefined(format!(
                    "even root ({index}) of a negative number"
                )));
            }
            if let Some(r) = rational::exact_root(&v, index) {
                return Ok(RealValue::Exact(r));
            }
        } else if index % 2 == 0 {
            match self.signum()? {
                RealOrdering::Less => {
                    return Err(Error::Undefined(format!(
                        "even root ({index}) of a negative number"
                    )))
                }
                RealOrdering::Equal => return Ok(RealValue::zero()),
                _ => {}
            }
        }
        Ok(RealValue::lazy(LazyReal::Root {
            radicand: self.clone(),
            index,
        }))
    }

    /// Decimal enclosure `[lo, hi]` rounded outward to `places` digits.
    pub fn decimal_interval(&self, places: usize) -> String {
        let depth = (places as f64 * 3.33).ceil() as u32 + 8;
        match self.enclose(depth) {
            Some(iv) => format!(
                "[{},{}]",
                rational::to_decimal(iv.lo(), places, false),
                rational::to_decimal(iv.hi(), places, true)
            ),
            None => "[?,?]".to_string(),
        }
    }

    pub fn approx_f64(&self) -> f64 {
        match self.enclose(60) {
            Some(iv) => rational::approx_f64(&((iv.lo() + iv.hi()) / rational::int(2))),
            None => f64::NAN,
        }
    }
}

impl LazyReal {
    fn enclose(&self, depth: u32) -> Option<Interval> {
        match self {
            LazyReal::Affine {
                scale,
                offset,
                inner,
            } => {
                let extra = magnitude_bits(scale);
                Some(inner.enclose(depth + extra)?.scale(scale).shift(offset))
            }
            LazyReal::Sum(a, b) => Some(a.enclose(depth + 1)?.add(&b.enclose(depth + 1)?)),
            LazyReal::Product(a, b) => {
                let extra = a.coarse_magnitude(depth)? + b.coarse_magnitude(depth)? + 1;
                Some(a.enclose(depth + extra)?.mul(&b.enclose(depth + extra)?))
            }
            LazyReal::Root { radicand, index } => {
                let r = radicand.enclose(depth.saturating_mul(*index).saturating_add(2))?;
                let mut lo = r.lo().clone();
                if index % 2 == 0 && lo.is_negative() {
                    lo = Rational::zero();
                }
                let hi = if index % 2 == 0 && r.hi().is_negative() {
                    Rational::zero()
                } else {
                    r.hi().clone()
                };
                let (lo_root, _) = root_bounds(&lo, *index, depth + 2);
                let (_, hi_root) = root_bounds(&hi, *index, depth + 2);
                Some(Interval::new(lo_root, hi_root))
            }
            LazyReal::Recip(x) => x.enclose(depth.saturating_mul(2).saturating_add(4))?.recip(),
            LazyReal::Abs(x) => Some(x.enclose(depth)?.abs()),
            LazyReal::Min(a, b) => Some(a.enclose(depth)?.min(&b.enclose(depth)?)),
            LazyReal::Max(a, b) => Some(a.enclose(depth)?.max(&b.enclose(depth)?)),
        }
    }
}

/// Compare two reals by refining both up to `budget` levels. `Less`/`Greater`
/// only once enclosures separate; `Equal` only when both values are known
/// exactly and agree.
pub fn cmp(a: &RealValue, b: &RealValue, budget: u32) -> RealOrdering {
    if let (Some(x), Some(y)) = (a.exact_value(), b.exact_value()) {
        return x.cmp(&y).into();
    }
    for depth in depth_schedule(budget) {
        let (Some(ea), Some(eb)) = (a.enclose(depth), b.enclose(depth)) else {
            continue;
        };
        if ea.hi() < eb.lo() {
            return RealOrdering::Less;
        }
        if ea.lo() > eb.hi() {
            return RealOrdering::Greater;
        }
    }
    RealOrdering::Undecided
}

/// `x^q` for rational `q = a/b` in lowest terms: the greatest real `y` with
/// `y^b = x^a`, or `Undefined` when no real root exists.
pub fn rat_pow(x: &RealValue, q: &Rational) -> Result<RealValue> {
    let a = q
        .numer()
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter("exponent numerator too large".into()))?;
    let b = q
        .denom()
        .to_u32()
        .ok_or_else(|| Error::InvalidParameter("exponent denominator too large".into()))?;
    if a == 0 {
        return Ok(RealValue::one());
    }
    let power = x.powi(a)?;
    power.root(b)
}

impl From<Rational> for RealValue {
    fn from(r: Rational) -> Self {
        RealValue::Exact(r)
    }
}

impl From<StreamReal> for RealValue {
    fn from(s: StreamReal) -> Self {
        RealValue::Stream(s)
    }
}

impl From<i64> for RealValue {
    fn from(v: i64) -> Self {
        RealValue::from_i64(v)
    }
}

impl fmt::Display for RealValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealValue::Exact(r) => write!(f, "{r}"),
            other => write!(f, "~{}", other.decimal_interval(12)),
        }
    }
}

/// Integer `floor` of an exact rational as a `BigInt`.
pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational::{int, rat};

    fn stream(base: u32, digits: &'static [u8]) -> RealValue {
        // Non-periodic tail so the value is not known exactly.
        RealValue::Stream(
            StreamReal::from_fn(base, move |k| {
                if k < digits.len() {
                    digits[k]
                } else {
                    ((k * k + 1) % base as usize) as u8
                }
            })
            .unwrap(),
        )
    }

    #[test]
    fn rat_pow_examples() {
        assert_eq!(rat_pow(&int(4).into(), &rat(3, 2)).unwrap(), int(8).into());
        assert!(matches!(
            rat_pow(&int(-4).into(), &rat(1, 2)),
            Err(Error::Undefined(_))
        ));
        assert_eq!(rat_pow(&int(-8).into(), &rat(1, 3)).unwrap(), int(-2).into());
        // Greatest root of y^3 = (-8)^2.
        assert_eq!(rat_pow(&int(-8).into(), &rat(2, 3)).unwrap(), int(4).into());
        assert!(matches!(
            rat_pow(&int(0).into(), &rat(-1, 1)),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn irrational_root_refines() {
        let r = rat_pow(&int(2).into(), &rat(1, 2)).unwrap();
        assert!(matches!(r, RealValue::Lazy(_)));
        let e = r.enclose(40).unwrap();
        assert!(e.lo() * e.lo() <= int(2) && e.hi() * e.hi() >= int(2));
        assert!(e.width() <= rat(1, 1 << 40));
    }

    #[test]
    fn cmp_examples() {
        assert_eq!(
            cmp(&rat(1, 2).into(), &rat(1, 3).into(), 0),
            RealOrdering::Greater
        );
        assert_eq!(
            cmp(&rat(7, 9).into(), &rat(7, 9).into(), 3),
            RealOrdering::Equal
        );
        let s = stream(2, &[1, 0, 1, 1, 1]);
        assert_eq!(cmp(&s, &rat(5, 8).into(), 4), RealOrdering::Greater);
        assert_eq!(cmp(&s, &rat(5, 8).into(), 3), RealOrdering::Undecided);
    }

    #[test]
    fn affine_chains_collapse() {
        let s = stream(3, &[1, 2, 0, 2]);
        let t = s.affine(&int(3), &int(-1)).affine(&int(3), &int(-2));
        match &t {
            RealValue::Lazy(node) => assert!(matches!(
                node.as_ref(),
                LazyReal::Affine { inner: RealValue::Stream(_), .. }
            )),
            _ => panic!("expected lazy affine"),
        }
        // 9 * 0.1202.. - 5 = 0.02.. in base 3
        let e = t.enclose(6).unwrap();
        assert!(e.contains(&rat(2, 9)) || e.lo() >= &rat(2, 9));
    }

    #[test]
    fn exact_results_stay_exact() {
        let a = RealValue::ratio(1, 3);
        let b = RealValue::ratio(2, 3);
        assert_eq!(a.add(&b), RealValue::one());
        assert_eq!(a.mul(&b), RealValue::ratio(2, 9));
        let periodic = RealValue::Stream(StreamReal::periodic(2, &[], &[0, 1]).unwrap());
        assert_eq!(periodic.recip().unwrap(), RealValue::from_i64(3));
    }

    #[test]
    fn schedule_ends_at_budget() {
        let v: Vec<u32> = depth_schedule(5).collect();
        assert_eq!(v, vec![0, 1, 2, 4, 5]);
        assert_eq!(depth_schedule(0).collect::<Vec<_>>(), vec![0]);
    }
}
