use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{Signed, Zero};

use crate::classical::ExtReal;
use crate::error::{Error, Result};
use crate::machine::{Configuration, Measurement};
use crate::numerics::rational::ceil_to_biguint;
use crate::numerics::real::depth_schedule;
use crate::numerics::{precision_cap, Interval, RealValue};

/// A natural number or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtNat {
    Finite(BigUint),
    Infinite,
}

impl ExtNat {
    pub fn from_u64(v: u64) -> Self {
        ExtNat::Finite(BigUint::from(v))
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            ExtNat::Finite(v) => u64::try_from(v).ok(),
            ExtNat::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtNat::Infinite)
    }
}

impl PartialOrd for ExtNat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtNat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtNat::Finite(a), ExtNat::Finite(b)) => a.cmp(b),
            (ExtNat::Finite(_), ExtNat::Infinite) => Ordering::Less,
            (ExtNat::Infinite, ExtNat::Finite(_)) => Ordering::Greater,
            (ExtNat::Infinite, ExtNat::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Finite(v) => write!(f, "{v}"),
            ExtNat::Infinite => write!(f, "inf"),
        }
    }
}

/// User-supplied measurement time, compared by identity.
#[derive(Clone)]
pub struct KappaFn(pub Arc<dyn Fn(&Configuration) -> Result<ExtNat> + Send + Sync>);

impl fmt::Debug for KappaFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KappaFn({:p})", Arc::as_ptr(&self.0))
    }
}

impl PartialEq for KappaFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// How long measuring a partition takes at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum KappaSpec {
    /// `p(ceil(1 / d))` with `d` the boundary distance and `p` given by
    /// natural coefficients, constant term first.
    InversePolynomial(Vec<u64>),
    /// `ceil(1 / min_i |x - p_i|)` on a one-dimensional space.
    InverseDistanceTo(Vec<RealValue>),
    Constant(ExtNat),
    Explicit(KappaFn),
}

impl KappaSpec {
    pub fn check(&self) -> Result<()> {
        match self {
            KappaSpec::InversePolynomial(c) if c.iter().skip(1).all(|&a| a == 0) => Err(
                Error::InvalidParameter("measurement-time polynomial must be strictly increasing".into()),
            ),
            KappaSpec::InverseDistanceTo(p) if p.is_empty() => {
                Err(Error::InvalidParameter("no reference points".into()))
            }
            _ => Ok(()),
        }
    }
}

fn poly_at(coeffs: &[u64], n: &ExtNat) -> ExtNat {
    let ExtNat::Finite(n) = n else {
        return ExtNat::Infinite;
    };
    let mut acc = BigUint::zero();
    for &c in coeffs.iter().rev() {
        acc = acc * n + BigUint::from(c);
    }
    ExtNat::Finite(acc)
}

/// `ceil(1 / d)` for `d` in the given enclosure, as lower and upper bounds.
fn inverse_ceil_bounds(d: &Interval) -> (ExtNat, ExtNat) {
    let inv = |v: &crate::numerics::Rational| {
        if v.is_positive() {
            ExtNat::Finite(ceil_to_biguint(&v.recip()))
        } else {
            ExtNat::Infinite
        }
    };
    (inv(d.hi()), inv(d.lo()))
}

enum Source {
    Exact(ExtNat),
    Distance { d: RealValue, poly: Option<Vec<u64>> },
}

/// Lazily refined bounds on one measurement time.
pub struct KappaTracker {
    source: Source,
    lo: ExtNat,
    hi: ExtNat,
    depths: Vec<u32>,
    next: usize,
}

impl KappaTracker {
    pub fn new(spec: &KappaSpec, measurement: &Measurement, config: &Configuration) -> Result<Self> {
        let source = match spec {
            KappaSpec::Constant(k) => Source::Exact(k.clone()),
            KappaSpec::Explicit(f) => Source::Exact((f.0)(config)?),
            KappaSpec::InversePolynomial(coeffs) => {
                let Measurement::Classical(p) = measurement else {
                    return Err(Error::UnsupportedPartitionClass(
                        "inverse polynomial time needs a classical partition".into(),
                    ));
                };
                let x = config.point().ok_or_else(|| {
                    Error::InvalidConstruction("inverse polynomial time needs a point".into())
                })?;
                match p.boundary_distance(x)? {
                    ExtReal::Infinite => Source::Exact(poly_at(coeffs, &ExtNat::from_u64(0))),
                    ExtReal::Finite(d) => Source::Distance {
                        d,
                        poly: Some(coeffs.clone()),
                    },
                }
            }
            KappaSpec::InverseDistanceTo(points) => {
                let x = match config.point() {
                    Some(p) if p.len() == 1 => &p[0],
                    _ => {
                        return Err(Error::InvalidConstruction(
                            "distance-based time needs a one-dimensional point".into(),
                        ))
                    }
                };
                let mut d: Option<RealValue> = None;
                for p in points {
                    let e = x.sub(p).abs();
                    d = Some(match d {
                        None => e,
                        Some(prev) => prev.min(&e),
                    });
                }
                Source::Distance {
                    d: d.expect("checked non-empty"),
                    poly: None,
                }
            }
        };
        let (lo, hi) = match &source {
            Source::Exact(k) => (k.clone(), k.clone()),
            Source::Distance { .. } => (ExtNat::from_u64(0), ExtNat::Infinite),
        };
        Ok(KappaTracker {
            source,
            lo,
            hi,
            depths: depth_schedule(precision_cap()).collect(),
            next: 0,
        })
    }

    pub fn bounds(&self) -> (&ExtNat, &ExtNat) {
        (&self.lo, &self.hi)
    }

    pub fn exact(&self) -> Option<&ExtNat> {
        (self.lo == self.hi).then_some(&self.lo)
    }

    /// Tightens the bounds one level; `false` once the cap is reached.
    fn refine(&mut self) -> bool {
        let Source::Distance { d, poly } = &self.source else {
            return false;
        };
        while self.next < self.depths.len() {
            let depth = self.depths[self.next];
            self.next += 1;
            if let Some(e) = d.enclose(depth) {
                let (lo, hi) = inverse_ceil_bounds(&e);
                let (lo, hi) = match poly {
                    Some(c) => (poly_at(c, &lo), poly_at(c, &hi)),
                    None => (lo, hi),
                };
                self.lo = self.lo.clone().max(lo);
                self.hi = self.hi.clone().min(hi);
                return true;
            }
        }
        false
    }

    /// Refines while the bounds differ and the next depth is within `max_depth`.
    pub fn settle(&mut self, max_depth: u32) {
        while self.exact().is_none() && self.depths.get(self.next).is_some_and(|&d| d <= max_depth) {
            self.refine();
        }
    }

    /// Whether the measurement time is at most `elapsed`.
    pub fn at_most(&mut self, elapsed: u64) -> Result<bool> {
        let e = ExtNat::from_u64(elapsed);
        loop {
            if self.hi <= e {
                return Ok(true);
            }
            if self.lo > e {
                return Ok(false);
            }
            if !self.refine() {
                return Err(Error::exhausted(precision_cap(), "measurement time"));
            }
        }
    }

    /// The exact value, refining up to the precision cap.
    pub fn value(&mut self) -> Result<ExtNat> {
        loop {
            if let Some(k) = self.exact() {
                return Ok(k.clone());
            }
            if !self.refine() {
                return Err(Error::exhausted(precision_cap(), "measurement time"));
            }
        }
    }

    pub fn describe(&self) -> String {
        match self.exact() {
            Some(k) => k.to_string(),
            None => format!("{}..{}", self.lo, self.hi),
        }
    }
}

/// `kappa(alpha, x)` as an exact extended natural.
pub fn kappa_eval(spec: &KappaSpec, measurement: &Measurement, config: &Configuration) -> Result<ExtNat> {
    KappaTracker::new(spec, measurement, config)?.value()
}
