use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{rat_pow, Rational, RealValue};

pub type Point = Vec<RealValue>;

pub fn exact_point(coords: &[Rational]) -> Point {
    coords.iter().cloned().map(RealValue::Exact).collect()
}

/// One monomial `coef * x1^q1 * ... * xm^qm`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coef: RealValue,
    pub exps: Vec<Rational>,
}

impl Term {
    pub fn new(coef: impl Into<RealValue>, exps: Vec<Rational>) -> Self {
        Term {
            coef: coef.into(),
            exps,
        }
    }

    pub fn constant(coef: impl Into<RealValue>, arity: usize) -> Self {
        Term::new(coef, vec![Rational::zero(); arity])
    }

    /// `coef * x_var`
    pub fn linear(coef: impl Into<RealValue>, arity: usize, var: usize) -> Self {
        let mut exps = vec![Rational::zero(); arity];
        exps[var] = Rational::one();
        Term::new(coef, exps)
    }

    fn eval(&self, x: &[RealValue]) -> Result<RealValue> {
        let mut acc = self.coef.clone();
        for (xi, q) in x.iter().zip(&self.exps) {
            if q.is_zero() {
                continue;
            }
            let factor = if q.is_one() { xi.clone() } else { rat_pow(xi, q)? };
            acc = acc.mul(&factor);
        }
        Ok(acc)
    }
}

/// Finite sum of monomials with rational exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    pub arity: usize,
    pub terms: Vec<Term>,
}

impl MultiPoly {
    pub fn new(arity: usize, terms: Vec<Term>) -> Result<Self> {
        if let Some(t) = terms.iter().find(|t| t.exps.len() != arity) {
            return Err(Error::DimensionMismatch {
                expected: arity,
                got: t.exps.len(),
            });
        }
        Ok(MultiPoly { arity, terms })
    }

    pub fn eval(&self, x: &[RealValue]) -> Result<RealValue> {
        if x.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                got: x.len(),
            });
        }
        let mut sum = RealValue::zero();
        for t in &self.terms {
            sum = sum.add(&t.eval(x)?);
        }
        Ok(sum)
    }

    pub fn coefficients_exact(&self) -> bool {
        self.terms.iter().all(|t| t.coef.as_exact().is_some())
    }
}

/// Componentwise map `R^m -> R^m`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalMap {
    pub components: Vec<MultiPoly>,
    /// Every coefficient is rational or declared algebraic.
    pub algebraic: bool,
}

impl ClassicalMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let m = components.len();
        if m == 0 {
            return Err(Error::InvalidConstruction("map needs at least one component".into()));
        }
        if let Some(c) = components.iter().find(|c| c.arity != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: c.arity,
            });
        }
        let algebraic = components.iter().all(MultiPoly::coefficients_exact);
        Ok(ClassicalMap {
            components,
            algebraic,
        })
    }

    /// Marks non-rational coefficients as algebraic numbers.
    pub fn declare_algebraic(mut self) -> Self {
        self.algebraic = true;
        self
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    /// `x -> A x + b` for a square rational matrix.
    pub fn affine(matrix: &[Vec<Rational>], offset: &[Rational]) -> Result<Self> {
        let m = matrix.len();
        if offset.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: offset.len(),
            });
        }
        let mut components = Vec::with_capacity(m);
        for (row, b) in matrix.iter().zip(offset) {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: row.len(),
                });
            }
            let mut terms: Vec<Term> = row
                .iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .map(|(j, a)| Term::linear(a.clone(), m, j))
                .collect();
            if !b.is_zero() {
                terms.push(Term::constant(b.clone(), m));
            }
            components.push(MultiPoly::new(m, terms)?);
        }
        ClassicalMap::new(components)
    }

    pub fn linear(matrix: &[Vec<Rational>]) -> Result<Self> {
        ClassicalMap::affine(matrix, &vec![Rational::zero(); matrix.len()])
    }

    /// One-dimensional `x -> a x + b`.
    pub fn affine_1d(a: Rational, b: Rational) -> Self {
        ClassicalMap::affine(&[vec![a]], &[b]).expect("1x1 affine map")
    }

    pub fn identity(m: usize) -> Self {
        let matrix: Vec<Vec<Rational>> = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect();
        ClassicalMap::linear(&matrix).expect("square identity")
    }

    pub fn apply(&self, x: &[RealValue]) -> Result<Point> {
        if x.len() != self.arity() {
            return Err(Error::DimensionMismatch {
                expected: self.arity(),
                got: x.len(),
            });
        }
        self.components.iter().map(|c| c.eval(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{int, rat};

    #[test]
    fn poly_examples() {
        let f = MultiPoly::new(1, vec![Term::linear(int(2), 1, 0)]).unwrap();
        assert_eq!(f.eval(&[rat(3, 8).into()]).unwrap(), rat(3, 4).into());
        let g = MultiPoly::new(
            2,
            vec![
                Term::new(int(1), vec![int(2), int(0)]),
                Term::new(int(1), vec![int(0), int(2)]),
            ],
        )
        .unwrap();
        assert_eq!(g.eval(&[int(3).into(), int(4).into()]).unwrap(), int(25).into());
        let h = MultiPoly::new(1, vec![Term::new(int(1), vec![rat(1, 2)])]).unwrap();
        assert!(matches!(h.eval(&[int(-1).into()]), Err(Error::Undefined(_))));
        assert!(matches!(
            h.eval(&[int(1).into(), int(1).into()]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rotation() {
        let rot = ClassicalMap::linear(&[vec![int(0), int(-1)], vec![int(1), int(0)]]).unwrap();
        assert!(rot.algebraic);
        assert_eq!(
            rot.apply(&exact_point(&[int(1), int(0)])).unwrap(),
            exact_point(&[int(0), int(1)])
        );
    }

    #[test]
    fn ragged_maps_rejected() {
        let p = MultiPoly::new(1, vec![]).unwrap();
        let q = MultiPoly::new(2, vec![]).unwrap();
        assert!(ClassicalMap::new(vec![p, q]).is_err());
    }
}
