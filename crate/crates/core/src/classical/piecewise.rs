use super::poly::{ClassicalMap, Point};
use super::set::SetExpr;
use crate::error::{Error, Result};
use crate::numerics::RealValue;

/// A map that is classical on each region of a measurable partition of its domain.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseMap {
    pub cases: Vec<(SetExpr, ClassicalMap)>,
    pub domain: SetExpr,
}

impl PiecewiseMap {
    pub fn new(cases: Vec<(SetExpr, ClassicalMap)>, domain: SetExpr) -> Result<Self> {
        let m = domain.dim();
        for (region, map) in &cases {
            if region.dim() != m || map.arity() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: if region.dim() != m { region.dim() } else { map.arity() },
                });
            }
        }
        if cases.is_empty() {
            return Err(Error::InvalidConstruction("piecewise map without cases".into()));
        }
        Ok(PiecewiseMap { cases, domain })
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn algebraic(&self) -> bool {
        self.cases.iter().all(|(_, m)| m.algebraic)
    }

    /// Applies the first case whose region contains `x`.
    pub fn apply(&self, x: &[RealValue], budget: u32) -> Result<Point> {
        if !self.domain.contains(x, budget)? {
            return Err(Error::OutsideDomain("piecewise map".into()));
        }
        let mut pending = None;
        for (region, map) in &self.cases {
            match region.contains(x, budget) {
                Ok(true) => return map.apply(x),
                Ok(false) => {}
                Err(e) => pending = pending.or(Some(e)),
            }
        }
        Err(pending.unwrap_or_else(|| Error::OutsideDomain("no case region contains the point".into())))
    }
}
