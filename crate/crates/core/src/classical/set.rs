use num_traits::Signed;

use super::poly::{ClassicalMap, Point};
use crate::error::{Error, Result};
use crate::numerics::{cmp, int, rat, RealOrdering, RealValue};

/// A classically measurable set.
#[derive(Clone, Debug, PartialEq)]
pub enum SetExpr {
    Ball {
        center: Point,
        radius: RealValue,
        closed: bool,
    },
    /// A one-dimensional interval; a missing bound is infinite.
    Interval {
        lo: Option<RealValue>,
        lo_closed: bool,
        hi: Option<RealValue>,
        hi_closed: bool,
    },
    Product(Box<SetExpr>, Box<SetExpr>),
    Union(Box<SetExpr>, Box<SetExpr>),
    Intersection(Box<SetExpr>, Box<SetExpr>),
    Complement(Box<SetExpr>),
    /// `{x : map(x) in inner}` for an invertible map.
    Preimage {
        map: ClassicalMap,
        inverse: ClassicalMap,
        inner: Box<SetExpr>,
    },
}

fn decided(o: RealOrdering, budget: u32, what: &str) -> Result<RealOrdering> {
    match o {
        RealOrdering::Undecided => Err(Error::exhausted(budget, what)),
        o => Ok(o),
    }
}

impl SetExpr {
    fn ball(center: Point, radius: RealValue, closed: bool) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidConstruction("ball needs a centre".into()));
        }
        if let Some(r) = radius.exact_value() {
            if r.is_negative() {
                return Err(Error::InvalidConstruction("negative ball radius".into()));
            }
        } else if radius.signum()? == RealOrdering::Less {
            return Err(Error::InvalidConstruction("negative ball radius".into()));
        }
        Ok(SetExpr::Ball {
            center,
            radius,
            closed,
        })
    }

    pub fn open_ball(center: Point, radius: impl Into<RealValue>) -> Result<Self> {
        SetExpr::ball(center, radius.into(), false)
    }

    pub fn closed_ball(center: Point, radius: impl Into<RealValue>) -> Result<Self> {
        SetExpr::ball(center, radius.into(), true)
    }

    pub fn interval(
        lo: Option<RealValue>,
        lo_closed: bool,
        hi: Option<RealValue>,
        hi_closed: bool,
    ) -> Self {
        SetExpr::Interval {
            lo_closed: lo_closed && lo.is_some(),
            hi_closed: hi_closed && hi.is_some(),
            lo,
            hi,
        }
    }

    /// `[lo, hi)`
    pub fn half_open(lo: impl Into<RealValue>, hi: impl Into<RealValue>) -> Self {
        SetExpr::interval(Some(lo.into()), true, Some(hi.into()), false)
    }

    pub fn closed(lo: impl Into<RealValue>, hi: impl Into<RealValue>) -> Self {
        SetExpr::interval(Some(lo.into()), true, Some(hi.into()), true)
    }

    pub fn real_line() -> Self {
        SetExpr::interval(None, false, None, false)
    }

    pub fn product(a: SetExpr, b: SetExpr) -> Self {
        SetExpr::Product(Box::new(a), Box::new(b))
    }

    fn same_dim(a: &SetExpr, b: &SetExpr) -> Result<()> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                got: b.dim(),
            });
        }
        Ok(())
    }

    pub fn union(a: SetExpr, b: SetExpr) -> Result<Self> {
        SetExpr::same_dim(&a, &b)?;
        Ok(SetExpr::Union(Box::new(a), Box::new(b)))
    }

    pub fn intersection(a: SetExpr, b: SetExpr) -> Result<Self> {
        SetExpr::same_dim(&a, &b)?;
        Ok(SetExpr::Intersection(Box::new(a), Box::new(b)))
    }

    pub fn complement(a: SetExpr) -> Self {
        SetExpr::Complement(Box::new(a))
    }

    /// Builds a preimage node after checking `inverse(map(x)) = x` on sample points.
    pub fn preimage(map: ClassicalMap, inverse: ClassicalMap, inner: SetExpr) -> Result<Self> {
        let m = inner.dim();
        if map.arity() != m || inverse.arity() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: map.arity(),
            });
        }
        check_round_trip(&map, &inverse)?;
        Ok(SetExpr::Preimage {
            map,
            inverse,
            inner: Box::new(inner),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            SetExpr::Ball { center, .. } => center.len(),
            SetExpr::Interval { .. } => 1,
            SetExpr::Product(a, b) => a.dim() + b.dim(),
            SetExpr::Union(a, _) | SetExpr::Intersection(a, _) => a.dim(),
            SetExpr::Complement(a) => a.dim(),
            SetExpr::Preimage { inner, .. } => inner.dim(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SetExpr::Ball { .. } | SetExpr::Interval { .. } => 0,
            SetExpr::Product(a, b) | SetExpr::Union(a, b) | SetExpr::Intersection(a, b) => {
                1 + a.depth().max(b.depth())
            }
            SetExpr::Complement(a) => 1 + a.depth(),
            SetExpr::Preimage { inner, .. } => 1 + inner.depth(),
        }
    }

    /// Membership, refining stream coordinates up to `budget` levels.
    pub fn contains(&self, x: &[RealValue], budget: u32) -> Result<bool> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        match self {
            SetExpr::Ball {
                center,
                radius,
                closed,
            } => {
                let mut d2 = RealValue::zero();
                for (xi, ci) in x.iter().zip(center) {
                    let diff = xi.sub(ci);
                    d2 = d2.add(&diff.mul(&diff));
                }
                let r2 = radius.mul(radius);
                Ok(match decided(cmp(&d2, &r2, budget), budget, "ball membership")? {
                    RealOrdering::Less => true,
                    RealOrdering::Equal => *closed,
                    _ => false,
                })
            }
            SetExpr::Interval {
                lo,
                lo_closed,
                hi,
                hi_closed,
            } => {
                let p = &x[0];
                if let Some(lo) = lo {
                    match decided(cmp(p, lo, budget), budget, "interval membership")? {
                        RealOrdering::Less => return Ok(false),
                        RealOrdering::Equal if !lo_closed => return Ok(false),
                        _ => {}
                    }
                }
                if let Some(hi) = hi {
                    match decided(cmp(p, hi, budget), budget, "interval membership")? {
                        RealOrdering::Greater => return Ok(false),
                        RealOrdering::Equal if !hi_closed => return Ok(false),
                        _ => {}
                    }
                }
                Ok(true)
            }
            SetExpr::Product(a, b) => {
                let (xa, xb) = x.split_at(a.dim());
                Ok(a.contains(xa, budget)? && b.contains(xb, budget)?)
            }
            SetExpr::Union(a, b) => match a.contains(x, budget) {
                Ok(true) => Ok(true),
                Ok(false) => b.contains(x, budget),
                Err(e) => match b.contains(x, budget) {
                    Ok(true) => Ok(true),
                    _ => Err(e),
                },
            },
            SetExpr::Intersection(a, b) => match a.contains(x, budget) {
                Ok(false) => Ok(false),
                Ok(true) => b.contains(x, budget),
                Err(e) => match b.contains(x, budget) {
                    Ok(false) => Ok(false),
                    _ => Err(e),
                },
            },
            SetExpr::Complement(a) => Ok(!a.contains(x, budget)?),
            SetExpr::Preimage { map, inner, .. } => match map.apply(x) {
                Ok(y) => inner.contains(&y, budget),
                Err(Error::Undefined(_)) => Ok(false),
                Err(e) => Err(e),
            },
        }
    }
}

/// Small deterministic rational grid used to spot-check inverses.
fn probe_points(m: usize) -> Vec<Point> {
    let values = [int(0), rat(1, 3), rat(-5, 7), int(2), rat(11, 4), rat(-3, 2)];
    (0..values.len())
        .map(|i| {
            (0..m)
                .map(|j| RealValue::Exact(values[(i + 2 * j + 1) % values.len()].clone()))
                .collect()
        })
        .collect()
}

fn check_round_trip(map: &ClassicalMap, inverse: &ClassicalMap) -> Result<()> {
    let mut checked = 0;
    for p in probe_points(map.arity()) {
        let Ok(y) = map.apply(&p) else { continue };
        let Ok(back) = inverse.apply(&y) else { continue };
        for (a, b) in back.iter().zip(&p) {
            let ok = match (a.exact_value(), b.exact_value()) {
                (Some(a), Some(b)) => a == b,
                _ => {
                    let diff = a.sub(b).abs();
                    cmp(&diff, &RealValue::ratio(1, 1 << 30), 64) == RealOrdering::Less
                }
            };
            if !ok {
                return Err(Error::InvalidConstruction(
                    "declared inverse does not undo the map".into(),
                ));
            }
        }
        checked += 1;
    }
    if checked == 0 {
        return Err(Error::InvalidConstruction(
            "map is undefined on every probe point".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::poly::exact_point;

    fn pt(v: crate::numerics::Rational) -> Point {
        vec![v.into()]
    }

    #[test]
    fn membership_examples() {
        let unit = SetExpr::open_ball(pt(int(0)), int(1)).unwrap();
        assert!(unit.contains(&pt(rat(1, 2)), 8).unwrap());
        let double = ClassicalMap::affine_1d(int(2), int(0));
        let half = ClassicalMap::affine_1d(rat(1, 2), int(0));
        let pre = SetExpr::preimage(double, half, unit).unwrap();
        assert!(pre.contains(&pt(rat(2, 5)), 8).unwrap());
        assert!(!pre.contains(&pt(rat(1, 2)), 8).unwrap());
        let closed = SetExpr::closed_ball(pt(int(0)), int(1)).unwrap();
        assert!(!SetExpr::complement(closed).contains(&pt(int(1)), 8).unwrap());
    }

    #[test]
    fn degenerate_radius() {
        assert!(SetExpr::open_ball(pt(int(0)), int(-1)).is_err());
        let empty = SetExpr::open_ball(pt(int(0)), int(0)).unwrap();
        assert!(!empty.contains(&pt(int(0)), 4).unwrap());
        let point = SetExpr::closed_ball(pt(int(0)), int(0)).unwrap();
        assert!(point.contains(&pt(int(0)), 4).unwrap());
    }

    #[test]
    fn bad_inverse_rejected() {
        let double = ClassicalMap::affine_1d(int(2), int(0));
        let wrong = ClassicalMap::affine_1d(int(2), int(0));
        let unit = SetExpr::open_ball(pt(int(0)), int(1)).unwrap();
        assert!(SetExpr::preimage(double, wrong, unit).is_err());
    }

    #[test]
    fn products_split_coordinates() {
        let sq = SetExpr::product(SetExpr::half_open(int(0), int(1)), SetExpr::closed(int(0), int(1)));
        assert!(sq.contains(&exact_point(&[rat(1, 2), int(1)]), 4).unwrap());
        assert!(!sq.contains(&exact_point(&[int(1), int(1)]), 4).unwrap());
        assert_eq!(sq.dim(), 2);
    }

    #[test]
    fn boundary_point_of_stream_is_undecided() {
        use crate::numerics::StreamReal;
        let s = StreamReal::from_fn(2, |k| if k == 0 { 1 } else { (k % 3 == 0) as u8 }).unwrap();
        let iv = SetExpr::interval(Some(s.clone().into()), true, None, false);
        assert!(matches!(
            iv.contains(&[s.into()], 12),
            Err(Error::PrecisionExhausted { .. })
        ));
    }
}
