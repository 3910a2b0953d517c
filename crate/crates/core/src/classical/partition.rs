use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Point;
use super::set::SetExpr;
use crate::error::{Error, Result};
use crate::numerics::rational::simplest_between;
use crate::numerics::real::depth_schedule;
use crate::numerics::{cmp, precision_cap, Rational, RealOrdering, RealValue};

/// A value in `[0, inf]`.
#[derive(Clone, Debug, PartialEq)]
pub enum ExtReal {
    Finite(RealValue),
    Infinite,
}

impl ExtReal {
    pub fn min(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Infinite, o) | (o, ExtReal::Infinite) => o,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a.min(&b)),
        }
    }

    pub fn finite(&self) -> Option<&RealValue> {
        match self {
            ExtReal::Finite(v) => Some(v),
            ExtReal::Infinite => None,
        }
    }
}

/// Caller-supplied boundary distance, compared by identity.
#[derive(Clone)]
pub struct DistanceFn(pub Arc<dyn Fn(&[RealValue]) -> Result<ExtReal> + Send + Sync>);

impl fmt::Debug for DistanceFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DistanceFn({:p})", Arc::as_ptr(&self.0))
    }
}

impl PartialEq for DistanceFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

/// A finite labelled partition of a domain.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub elements: Vec<(String, SetExpr)>,
    pub domain: SetExpr,
    pub distance: Option<DistanceFn>,
}

impl Partition {
    pub fn new(elements: Vec<(String, SetExpr)>, domain: SetExpr) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidConstruction("partition needs an element".into()));
        }
        let m = domain.dim();
        for (label, set) in &elements {
            if set.dim() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: set.dim(),
                });
            }
            if elements.iter().filter(|(l, _)| l == label).count() > 1 {
                return Err(Error::InvalidConstruction(format!("duplicate label {label}")));
            }
        }
        Ok(Partition {
            elements,
            domain,
            distance: None,
        })
    }

    pub fn with_distance(
        mut self,
        f: impl Fn(&[RealValue]) -> Result<ExtReal> + Send + Sync + 'static,
    ) -> Self {
        self.distance = Some(DistanceFn(Arc::new(f)));
        self
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|(l, _)| l.as_str())
    }

    pub fn element(&self, label: &str) -> Option<&SetExpr> {
        self.elements.iter().find(|(l, _)| l == label).map(|(_, s)| s)
    }

    /// Label of the element containing `x`.
    pub fn classify(&self, x: &[RealValue], budget: u32) -> Result<&str> {
        let mut pending = None;
        for (label, set) in &self.elements {
            match set.contains(x, budget) {
                Ok(true) => return Ok(label),
                Ok(false) => {}
                Err(e) => pending = pending.or(Some(e)),
            }
        }
        Err(pending.unwrap_or_else(|| Error::OutsideDomain("no partition element contains the point".into())))
    }

    /// Euclidean distance from `x` to the union of element boundaries.
    pub fn boundary_distance(&self, x: &[RealValue]) -> Result<ExtReal> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if let Some(f) = &self.distance {
            return (f.0)(x);
        }
        let rim: Vec<RealValue> = match interval_parts(&self.domain) {
            Some(b) => b.lo.into_iter().chain(b.hi).collect(),
            None => Vec::new(),
        };
        let mut best = ExtReal::Infinite;
        for (label, set) in &self.elements {
            let d = set_boundary_distance(set, x, &rim)?
                .ok_or_else(|| Error::UnsupportedPartitionClass(format!("element {label}")))?;
            best = best.min(d);
        }
        Ok(best)
    }
}

fn interval_parts(set: &SetExpr) -> Option<Bounds> {
    match set {
        SetExpr::Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        } => Some(Bounds {
            lo: lo.clone(),
            lo_closed: *lo_closed,
            hi: hi.clone(),
            hi_closed: *hi_closed,
        }),
        SetExpr::Ball {
            center,
            radius,
            closed,
        } if center.len() == 1 => Some(Bounds {
            lo: Some(center[0].sub(radius)),
            lo_closed: *closed,
            hi: Some(center[0].add(radius)),
            hi_closed: *closed,
        }),
        _ => None,
    }
}

#[derive(Clone, Debug)]
struct Bounds {
    lo: Option<RealValue>,
    lo_closed: bool,
    hi: Option<RealValue>,
    hi_closed: bool,
}

/// Interval factors of an axis-aligned box, one per coordinate.
fn box_factors(set: &SetExpr) -> Option<Vec<Bounds>> {
    match set {
        SetExpr::Product(a, b) => {
            let mut f = box_factors(a)?;
            f.extend(box_factors(b)?);
            Some(f)
        }
        SetExpr::Interval { .. } => Some(vec![interval_parts(set)?]),
        _ => None,
    }
}

/// Boundary distance of one element. Endpoints in `rim` bound the domain
/// itself and are not part of the boundary relative to it.
fn set_boundary_distance(set: &SetExpr, x: &[RealValue], rim: &[RealValue]) -> Result<Option<ExtReal>> {
    match set {
        SetExpr::Complement(inner) => set_boundary_distance(inner, x, rim),
        SetExpr::Interval { lo, hi, .. } => {
            let mut best = ExtReal::Infinite;
            for e in lo.iter().chain(hi) {
                if rim.iter().any(|r| same_point(r, e) == Some(Ordering::Equal)) {
                    continue;
                }
                best = best.min(ExtReal::Finite(x[0].sub(e).abs()));
            }
            Ok(Some(best))
        }
        SetExpr::Ball { center, radius, .. } => {
            let mut d2 = RealValue::zero();
            for (xi, ci) in x.iter().zip(center) {
                let diff = xi.sub(ci);
                d2 = d2.add(&diff.mul(&diff));
            }
            let norm = d2.root(2)?;
            Ok(Some(ExtReal::Finite(norm.sub(radius).abs())))
        }
        SetExpr::Product(..) => match box_factors(set) {
            Some(factors) => box_distance(&factors, x).map(Some),
            None => Ok(None),
        },
        _ => Ok(None),
    }
}

fn box_distance(factors: &[Bounds], x: &[RealValue]) -> Result<ExtReal> {
    // Signed depth inside the box: positive inside, negative outside.
    let mut depth = ExtReal::Infinite;
    for (b, xi) in factors.iter().zip(x) {
        if let Some(lo) = &b.lo {
            depth = depth.min(ExtReal::Finite(xi.sub(lo)));
        }
        if let Some(hi) = &b.hi {
            depth = depth.min(ExtReal::Finite(hi.sub(xi)));
        }
    }
    let ExtReal::Finite(s) = depth else {
        return Ok(ExtReal::Infinite);
    };
    match cmp(&s, &RealValue::zero(), precision_cap()) {
        RealOrdering::Greater | RealOrdering::Equal => Ok(ExtReal::Finite(s)),
        RealOrdering::Undecided => Err(Error::exhausted(precision_cap(), "box boundary distance")),
        RealOrdering::Less => {
            let mut d2 = RealValue::zero();
            for (b, xi) in factors.iter().zip(x) {
                let mut gap = RealValue::zero();
                if let Some(lo) = &b.lo {
                    gap = gap.max(&lo.sub(xi));
                }
                if let Some(hi) = &b.hi {
                    gap = gap.max(&xi.sub(hi));
                }
                d2 = d2.add(&gap.mul(&gap));
            }
            Ok(ExtReal::Finite(d2.root(2)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ViolationKind {
    /// The witness lies in several elements.
    Overlap(Vec<String>),
    /// The witness lies in the domain but in no element.
    Uncovered,
    /// The witness lies in elements but outside the domain.
    Stray(Vec<String>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartitionReport {
    pub valid: bool,
    /// The verdict is a proof rather than a sampling result.
    pub exact: bool,
    pub violation: Option<Violation>,
}

fn status(in_domain: bool, labels: Vec<String>) -> Option<ViolationKind> {
    match (in_domain, labels.len()) {
        (_, n) if n >= 2 => Some(ViolationKind::Overlap(labels)),
        (true, 0) => Some(ViolationKind::Uncovered),
        (false, n) if n > 0 => Some(ViolationKind::Stray(labels)),
        _ => None,
    }
}

/// Checks disjointness and coverage. Exact for one-dimensional interval
/// partitions with comparable endpoints, sampled on `samples` points otherwise.
pub fn validate_partition(alpha: &Partition, samples: usize) -> PartitionReport {
    if let Some(report) = validate_exact_1d(alpha) {
        return report;
    }
    validate_sampled(alpha, samples)
}

fn same_point(a: &RealValue, b: &RealValue) -> Option<Ordering> {
    if !matches!(a, RealValue::Exact(_)) && a == b {
        return Some(Ordering::Equal);
    }
    match cmp(a, b, precision_cap()) {
        RealOrdering::Less => Some(Ordering::Less),
        RealOrdering::Greater => Some(Ordering::Greater),
        RealOrdering::Equal => Some(Ordering::Equal),
        RealOrdering::Undecided => None,
    }
}

fn position(sorted: &[RealValue], v: &RealValue) -> Option<std::result::Result<usize, usize>> {
    for (i, e) in sorted.iter().enumerate() {
        match same_point(v, e)? {
            Ordering::Equal => return Some(Ok(i)),
            Ordering::Less => return Some(Err(i)),
            Ordering::Greater => {}
        }
    }
    Some(Err(sorted.len()))
}

fn validate_exact_1d(alpha: &Partition) -> Option<PartitionReport> {
    let domain = interval_parts(&alpha.domain)?;
    let elements: Vec<(String, Bounds)> = alpha
        .elements
        .iter()
        .map(|(l, s)| interval_parts(s).map(|b| (l.clone(), b)))
        .collect::<Option<_>>()?;

    let mut sorted: Vec<RealValue> = Vec::new();
    for b in elements.iter().map(|(_, b)| b).chain(std::iter::once(&domain)) {
        for e in b.lo.iter().chain(&b.hi) {
            if let Err(i) = position(&sorted, e)? {
                sorted.insert(i, e.clone());
            }
        }
    }
    let n = sorted.len();
    // Cell 2i+1 is the endpoint sorted[i]; even cells are the open gaps.
    let cell_range = |b: &Bounds| -> Option<(usize, usize)> {
        let first = match &b.lo {
            None => 0,
            Some(v) => {
                let i = position(&sorted, v)?.ok()?;
                if b.lo_closed {
                    2 * i + 1
                } else {
                    2 * i + 2
                }
            }
        };
        let last = match &b.hi {
            None => 2 * n,
            Some(v) => {
                let j = position(&sorted, v)?.ok()?;
                if b.hi_closed {
                    2 * j + 1
                } else {
                    2 * j
                }
            }
        };
        Some((first, last))
    };
    let dom = cell_range(&domain)?;
    let ranges: Vec<(String, (usize, usize))> = elements
        .iter()
        .map(|(l, b)| cell_range(b).map(|r| (l.clone(), r)))
        .collect::<Option<_>>()?;

    let cell_status = |c: usize| {
        let labels: Vec<String> = ranges
            .iter()
            .filter(|(_, (f, l))| *f <= c && c <= *l)
            .map(|(label, _)| label.clone())
            .collect();
        status(dom.0 <= c && c <= dom.1, labels)
    };

    let mut c = 0;
    while c <= 2 * n {
        let kind = cell_status(c);
        let start = c;
        while c < 2 * n && cell_status(c + 1) == kind {
            c += 1;
        }
        if let Some(kind) = kind {
            let witness = region_witness(&sorted, start, c)?;
            return Some(PartitionReport {
                valid: false,
                exact: true,
                violation: Some(Violation {
                    kind,
                    witness: vec![witness],
                }),
            });
        }
        c += 1;
    }
    Some(PartitionReport {
        valid: true,
        exact: true,
        violation: None,
    })
}

/// Simplest rational in the union of cells `first..=last`.
fn region_witness(sorted: &[RealValue], first: usize, last: usize) -> Option<RealValue> {
    let n = sorted.len();
    if first == last && first % 2 == 1 {
        return Some(sorted[first / 2].clone());
    }
    let lower = if first % 2 == 1 {
        Some((&sorted[first / 2], true))
    } else if first == 0 {
        None
    } else {
        Some((&sorted[first / 2 - 1], false))
    };
    let upper = if last % 2 == 1 {
        Some((&sorted[last / 2], true))
    } else if last == 2 * n {
        None
    } else {
        Some((&sorted[last / 2], false))
    };
    let exact = |b: Option<(&RealValue, bool)>| match b {
        None => Some(None),
        Some((v, c)) => v.exact_value().map(|r| Some((r, c))),
    };
    if let (Some(lo), Some(hi)) = (exact(lower), exact(upper)) {
        let lo = lo.as_ref().map(|(r, c)| (r, *c));
        let hi = hi.as_ref().map(|(r, c)| (r, *c));
        return simplest_between(lo, hi).map(RealValue::Exact);
    }
    // Stream endpoints: shrink to rational bounds strictly inside the region.
    for depth in depth_schedule(precision_cap()) {
        let lo = match lower {
            Some((v, _)) => Some(v.enclose(depth)?.hi().clone()),
            None => None,
        };
        let hi = match upper {
            Some((v, _)) => Some(v.enclose(depth)?.lo().clone()),
            None => None,
        };
        let found = simplest_between(
            lo.as_ref().map(|r: &Rational| (r, false)),
            hi.as_ref().map(|r: &Rational| (r, false)),
        );
        if let Some(w) = found {
            return Some(RealValue::Exact(w));
        }
    }
    None
}

fn sample_box(set: &SetExpr) -> Option<Vec<(Rational, Rational)>> {
    let approx = |v: &RealValue, up: bool| -> Option<Rational> {
        let e = v.enclose(16)?;
        Some(if up { e.hi().clone() } else { e.lo().clone() })
    };
    match set {
        SetExpr::Interval { lo, hi, .. } => {
            Some(vec![(approx(lo.as_ref()?, false)?, approx(hi.as_ref()?, true)?)])
        }
        SetExpr::Ball { center, radius, .. } => center
            .iter()
            .map(|c| Some((approx(&c.sub(radius), false)?, approx(&c.add(radius), true)?)))
            .collect(),
        SetExpr::Product(a, b) => {
            let mut v = sample_box(a)?;
            v.extend(sample_box(b)?);
            Some(v)
        }
        SetExpr::Intersection(a, b) => sample_box(a).or_else(|| sample_box(b)),
        SetExpr::Union(a, b) => {
            let (x, y) = (sample_box(a)?, sample_box(b)?);
            Some(
                x.into_iter()
                    .zip(y)
                    .map(|((l1, h1), (l2, h2))| (l1.min(l2), h1.max(h2)))
                    .collect(),
            )
        }
        _ => None,
    }
}

fn validate_sampled(alpha: &Partition, samples: usize) -> PartitionReport {
    let m = alpha.dim();
    let bounds = sample_box(&alpha.domain).unwrap_or_else(|| {
        vec![(Rational::from_integer((-4).into()), Rational::from_integer(4.into())); m]
    });
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED ^ samples as u64);
    let grid = 1i64 << 16;
    for _ in 0..samples {
        let x: Point = bounds
            .iter()
            .map(|(lo, hi)| {
                let k: i64 = rng.gen_range(0..=grid);
                RealValue::Exact(lo + (hi - lo) * Rational::new(k.into(), grid.into()))
            })
            .collect();
        let budget = precision_cap();
        let Ok(in_domain) = alpha.domain.contains(&x, budget) else {
            continue;
        };
        let mut labels = Vec::new();
        let mut undecided = false;
        for (label, set) in &alpha.elements {
            match set.contains(&x, budget) {
                Ok(true) => labels.push(label.clone()),
                Ok(false) => {}
                Err(_) => undecided = true,
            }
        }
        if undecided {
            continue;
        }
        if let Some(kind) = status(in_domain, labels) {
            return PartitionReport {
                valid: false,
                exact: false,
                violation: Some(Violation { kind, witness: x }),
            };
        }
    }
    PartitionReport {
        valid: true,
        exact: false,
        violation: None,
    }
}
