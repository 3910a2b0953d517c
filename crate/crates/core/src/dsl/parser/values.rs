use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{PResult, Parser};
use crate::advice::{encode_source, EncodingScheme};
use crate::classical::{ClassicalMap, MultiPoly, Partition, PiecewiseMap, SetExpr, Term};
use crate::dsl::lexer::Tok;
use crate::machine::{Measurement, Predicate, TapeOp, Transformation};
use crate::numerics::{DigitSource, LazyReal, Rational, RealValue, StreamReal};
use crate::timed::{ExtNat, KappaSpec};

/// A monomial before the arity of its map is known: coefficient and `(variable, exponent)` factors.
type RawTerm = (RealValue, Vec<(usize, Rational)>);

fn variable(s: &str) -> Option<usize> {
    let k: usize = s.strip_prefix('x')?.parse().ok()?;
    (k >= 1).then_some(k)
}

fn lazy(node: LazyReal) -> RealValue {
    RealValue::Lazy(Arc::new(node))
}

impl Parser {
    fn integer(&mut self) -> PResult<Rational> {
        let n: num_bigint::BigInt = self.uint()?;
        Ok(Rational::from_integer(n))
    }

    /// `n` or `n/d`, unsigned.
    fn fraction(&mut self) -> PResult<Rational> {
        let at = self.pos;
        let n = self.integer()?;
        if !self.eat_punct('/') {
            return Ok(n);
        }
        let d = self.integer()?;
        if d.is_zero() {
            return Err(self.diag_at(at, "zero denominator"));
        }
        Ok(n / d)
    }

    pub(super) fn rational(&mut self) -> PResult<Rational> {
        let at = self.pos;
        match self.real()? {
            RealValue::Exact(r) => Ok(r),
            _ => Err(self.diag_at(at, "expected a rational number")),
        }
    }

    fn two_reals(&mut self) -> PResult<(RealValue, RealValue)> {
        let a = self.real()?;
        self.expect_punct(',')?;
        let b = self.real()?;
        Ok((a, b))
    }

    /// `stream base=B "digits(cycle)"`, the keyword already consumed.
    fn stream(&mut self, at: usize) -> PResult<RealValue> {
        self.expect_word("base")?;
        self.expect_punct('=')?;
        let base: u32 = self.uint()?;
        let digits_at = self.pos;
        let text = self.string()?;
        let bad = || self.diag_at(digits_at, format!("bad digit string {text:?}"));
        let (prefix, cycle) = match text.split_once('(') {
            Some((p, rest)) => (p, rest.strip_suffix(')').ok_or_else(bad)?),
            None => (text.as_str(), ""),
        };
        let digits = |s: &str| -> PResult<Vec<u8>> {
            s.chars()
                .map(|c| c.to_digit(36).map(|d| d as u8).ok_or_else(bad))
                .collect()
        };
        let source = DigitSource::Digits { prefix: digits(prefix)?, cycle: digits(cycle)? };
        let s = StreamReal::new(base, source).map_err(|e| self.diag_at(at, e.to_string()))?;
        Ok(RealValue::Stream(s))
    }

    pub(super) fn real(&mut self) -> PResult<RealValue> {
        let at = self.pos;
        if self.eat_punct('-') {
            return match self.real()? {
                RealValue::Exact(r) => Ok(RealValue::Exact(-r)),
                _ => Err(self.diag_at(at, "only rational numbers can be negated")),
            };
        }
        if matches!(self.peek(), Some(Tok::Int(_))) {
            return Ok(RealValue::Exact(self.fraction()?));
        }
        if self.eat_word("stream") {
            return self.stream(at);
        }
        let word = self.ident()?;
        self.expect_punct('(')?;
        let value = match word.as_str() {
            "file" => {
                self.pos -= 2;
                let source = self.source()?;
                let s = encode_source(&source, EncodingScheme::Binary)
                    .map_err(|e| self.diag_at(at, e.to_string()))?;
                return Ok(RealValue::Stream(s));
            }
            "encode" => {
                let scheme = if self.eat_word("binary") {
                    EncodingScheme::Binary
                } else if self.eat_word("ternary") {
                    EncodingScheme::TernaryInterleaved
                } else {
                    return self.unexpected("`binary` or `ternary`");
                };
                self.expect_punct(',')?;
                let source = self.source()?;
                let s = encode_source(&source, scheme).map_err(|e| self.diag_at(at, e.to_string()))?;
                RealValue::Stream(s)
            }
            "affine" => {
                let scale = self.rational()?;
                self.expect_punct(',')?;
                let offset = self.rational()?;
                self.expect_punct(',')?;
                let inner = self.real()?;
                lazy(LazyReal::Affine { scale, offset, inner })
            }
            "sum" => {
                let (a, b) = self.two_reals()?;
                lazy(LazyReal::Sum(a, b))
            }
            "prod" => {
                let (a, b) = self.two_reals()?;
                lazy(LazyReal::Product(a, b))
            }
            "min" => {
                let (a, b) = self.two_reals()?;
                lazy(LazyReal::Min(a, b))
            }
            "max" => {
                let (a, b) = self.two_reals()?;
                lazy(LazyReal::Max(a, b))
            }
            "root" => {
                let radicand = self.real()?;
                self.expect_punct(',')?;
                let index = self.uint()?;
                lazy(LazyReal::Root { radicand, index })
            }
            "recip" => lazy(LazyReal::Recip(self.real()?)),
            "abs" => lazy(LazyReal::Abs(self.real()?)),
            other => return Err(self.diag_at(at, format!("unknown number form `{other}`"))),
        };
        self.expect_punct(')')?;
        Ok(value)
    }

    fn closure(&mut self) -> PResult<bool> {
        if self.eat_word("closed") {
            Ok(true)
        } else if self.eat_word("open") {
            Ok(false)
        } else {
            self.unexpected("`closed` or `open`")
        }
    }

    pub(super) fn set(&mut self) -> PResult<SetExpr> {
        let at = self.pos;
        let word = self.ident()?;
        self.expect_punct('(')?;
        let fail = |p: &Self, e: crate::Error| p.diag_at(at, e.to_string());
        let s = match word.as_str() {
            "ball" => {
                self.expect_punct('(')?;
                let center = self.list(')', Self::real)?;
                self.expect_punct(',')?;
                let radius = self.real()?;
                self.expect_punct(',')?;
                let r = if self.closure()? {
                    SetExpr::closed_ball(center, radius)
                } else {
                    SetExpr::open_ball(center, radius)
                };
                r.map_err(|e| fail(self, e))?
            }
            "interval" => {
                let lo = if self.at_punct('-') && self.peek_at(1) == Some(&Tok::Ident("inf".into())) {
                    self.pos += 2;
                    None
                } else {
                    Some(self.real()?)
                };
                self.expect_punct(',')?;
                let hi = if self.eat_word("inf") { None } else { Some(self.real()?) };
                self.expect_punct(',')?;
                let lo_closed = self.closure()?;
                self.expect_punct(',')?;
                let hi_closed = self.closure()?;
                SetExpr::interval(lo, lo_closed, hi, hi_closed)
            }
            "product" | "union" | "inter" => {
                let a = self.set()?;
                self.expect_punct(',')?;
                let b = self.set()?;
                match word.as_str() {
                    "product" => SetExpr::product(a, b),
                    "union" => SetExpr::union(a, b).map_err(|e| fail(self, e))?,
                    _ => SetExpr::intersection(a, b).map_err(|e| fail(self, e))?,
                }
            }
            "compl" => SetExpr::complement(self.set()?),
            "preimage" => {
                let map = self.map()?;
                self.expect_punct(',')?;
                let inverse = self.map()?;
                self.expect_punct(',')?;
                let inner = self.set()?;
                SetExpr::preimage(map, inverse, inner).map_err(|e| fail(self, e))?
            }
            other => return Err(self.diag_at(at, format!("unknown set form `{other}`"))),
        };
        self.expect_punct(')')?;
        Ok(s)
    }

    fn exponent(&mut self) -> PResult<Rational> {
        if !self.eat_punct('^') {
            return Ok(Rational::one());
        }
        if self.eat_punct('(') {
            let neg = self.eat_punct('-');
            let q = self.fraction()?;
            self.expect_punct(')')?;
            Ok(if neg { -q } else { q })
        } else {
            self.integer()
        }
    }

    fn factor(&mut self) -> PResult<(usize, Rational)> {
        let at = self.pos;
        let v = self.ident()?;
        let k = variable(&v).ok_or_else(|| self.diag_at(at, format!("expected a variable x1, x2, ..., found `{v}`")))?;
        Ok((k, self.exponent()?))
    }

    fn term(&mut self) -> PResult<(usize, RawTerm)> {
        let at = self.pos;
        let mut factors = Vec::new();
        let coef = match self.peek() {
            Some(Tok::Ident(s)) if variable(s).is_some() => {
                factors.push(self.factor()?);
                RealValue::one()
            }
            _ => self.real()?,
        };
        while self.eat_punct('*') {
            factors.push(self.factor()?);
        }
        Ok((at, (coef, factors)))
    }

    fn poly(&mut self) -> PResult<Vec<(usize, RawTerm)>> {
        if self.eat_word("zero") {
            return Ok(Vec::new());
        }
        let mut terms = vec![self.term()?];
        while self.eat_punct('+') {
            terms.push(self.term()?);
        }
        Ok(terms)
    }

    pub(super) fn map(&mut self) -> PResult<ClassicalMap> {
        let at = self.pos;
        self.expect_word("map")?;
        self.expect_punct('[')?;
        let raw = self.list(']', Self::poly)?;
        let m = raw.len();
        let mut components = Vec::with_capacity(m);
        for poly in raw {
            let mut terms = Vec::with_capacity(poly.len());
            for (term_at, (coef, factors)) in poly {
                let mut exps = vec![Rational::zero(); m];
                for (k, q) in factors {
                    if k > m {
                        return Err(self.diag_at(term_at, format!("variable x{k} in a map of arity {m}")));
                    }
                    exps[k - 1] += q;
                }
                terms.push(Term::new(coef, exps));
            }
            components.push(MultiPoly::new(m, terms).map_err(|e| self.diag_at(at, e.to_string()))?);
        }
        let map = ClassicalMap::new(components).map_err(|e| self.diag_at(at, e.to_string()))?;
        Ok(if self.eat_word("algebraic") { map.declare_algebraic() } else { map })
    }

    fn predicate(&mut self) -> PResult<Predicate> {
        let at = self.pos;
        let n = self.name()?;
        Predicate::from_name(&n).ok_or_else(|| {
            self.diag_at(
                at,
                format!("unknown predicate {n} (known: {})", Predicate::BUILTIN.join(", ")),
            )
        })
    }

    pub(super) fn tape_op(&mut self) -> PResult<TapeOp> {
        if self.eat_word("left") {
            Ok(TapeOp::ShiftLeft)
        } else if self.eat_word("right") {
            Ok(TapeOp::ShiftRight)
        } else if self.eat_word("id") {
            Ok(TapeOp::Identity)
        } else if self.eat_word("write") {
            Ok(TapeOp::Write(self.char_lit()?))
        } else {
            self.unexpected("`left`, `right`, `id` or `write`")
        }
    }

    pub(super) fn transformation(&mut self) -> PResult<Transformation> {
        if self.at_word("map") {
            return Ok(Transformation::Classical(self.map()?));
        }
        let at = self.pos;
        let word = self.ident()?;
        self.expect_punct('(')?;
        let t = match word.as_str() {
            "piecewise" => {
                let domain = self.set()?;
                let mut cases = Vec::new();
                while self.eat_punct(',') {
                    let region = self.set()?;
                    self.expect_arrow()?;
                    cases.push((region, self.map()?));
                }
                let p = PiecewiseMap::new(cases, domain).map_err(|e| self.diag_at(at, e.to_string()))?;
                Transformation::Piecewise(p)
            }
            "tape" => Transformation::Tape(self.tape_op()?),
            "oracle" => {
                let predicate = self.predicate()?;
                self.expect_punct(',')?;
                Transformation::Oracle { predicate, mark: self.char_lit()? }
            }
            "sign-indicator" => Transformation::SignIndicator(self.predicate()?),
            other => return Err(self.diag_at(at, format!("unknown transformation form `{other}`"))),
        };
        self.expect_punct(')')?;
        Ok(t)
    }

    pub(super) fn measurement(&mut self) -> PResult<Measurement> {
        let at = self.pos;
        let word = self.ident()?;
        self.expect_punct('(')?;
        let m = match word.as_str() {
            "cells" => {
                let domain = self.set()?;
                let mut elements = Vec::new();
                while self.eat_punct(',') {
                    let label = self.string()?;
                    self.expect_punct('=')?;
                    elements.push((label, self.set()?));
                }
                let p = Partition::new(elements, domain).map_err(|e| self.diag_at(at, e.to_string()))?;
                Measurement::Classical(p)
            }
            "tape-read" => Measurement::TapeRead { alphabet: self.string()?.chars().collect() },
            "floor-binary" => Measurement::FloorBinary(self.predicate()?),
            other => return Err(self.diag_at(at, format!("unknown partition form `{other}`"))),
        };
        self.expect_punct(')')?;
        Ok(m)
    }

    pub(super) fn kappa(&mut self) -> PResult<KappaSpec> {
        let at = self.pos;
        let word = self.ident()?;
        self.expect_punct('(')?;
        let k = match word.as_str() {
            "inverse-polynomial" => {
                let mut c = vec![self.uint()?];
                while self.eat_punct(',') {
                    c.push(self.uint()?);
                }
                KappaSpec::InversePolynomial(c)
            }
            "inverse-distance" => {
                let mut p = vec![self.real()?];
                while self.eat_punct(',') {
                    p.push(self.real()?);
                }
                KappaSpec::InverseDistanceTo(p)
            }
            "constant" => {
                if self.eat_word("inf") {
                    KappaSpec::Constant(ExtNat::Infinite)
                } else {
                    let n: BigUint = self.uint()?;
                    KappaSpec::Constant(ExtNat::Finite(n))
                }
            }
            other => return Err(self.diag_at(at, format!("unknown measurement time `{other}`"))),
        };
        self.expect_punct(')')?;
        k.check().map_err(|e| self.diag_at(at, e.to_string()))?;
        Ok(k)
    }
}
