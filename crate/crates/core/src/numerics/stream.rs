//! Reals in `[0, 1]` defined by a total digit function.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use parking_lot::Mutex;

use super::interval::Interval;
use super::rational::Rational;
use crate::advice::{EncodingScheme, SymbolSource};
use crate::error::{Error, Result};

/// Opaque digit function, compared by identity.
#[derive(Clone)]
pub struct DigitFn(pub Arc<dyn Fn(usize) -> u8 + Send + Sync>);

impl fmt::Debug for DigitFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitFn({:p})", Arc::as_ptr(&self.0))
    }
}

impl PartialEq for DigitFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DigitSource {
    /// `prefix` followed by `cycle` repeated forever; an empty cycle means zeros.
    Digits { prefix: Vec<u8>, cycle: Vec<u8> },
    /// Digits obtained by encoding an advice symbol stream.
    Encoded {
        symbols: SymbolSource,
        scheme: EncodingScheme,
    },
    Custom(DigitFn),
}

impl DigitSource {
    fn digit(&self, k: usize) -> u8 {
        match self {
            DigitSource::Digits { prefix, cycle } => {
                if k < prefix.len() {
                    prefix[k]
                } else if cycle.is_empty() {
                    0
                } else {
                    cycle[(k - prefix.len()) % cycle.len()]
                }
            }
            DigitSource::Encoded { symbols, scheme } => scheme.digit(symbols, k),
            DigitSource::Custom(f) => (f.0)(k),
        }
    }

    /// Eventually periodic digit description, when one is known.
    fn periodic_form(&self) -> Option<(Vec<u8>, Vec<u8>)> {
        match self {
            DigitSource::Digits { prefix, cycle } => Some((prefix.clone(), cycle.clone())),
            DigitSource::Encoded { symbols, scheme } => {
                let (prefix, cycle) = symbols.periodic_form()?;
                Some(scheme.periodic_digits(&prefix, &cycle))
            }
            DigitSource::Custom(_) => None,
        }
    }
}

struct StreamInner {
    base: u32,
    source: DigitSource,
    cache: Mutex<Vec<u8>>,
}

/// A real in `[0, 1]` given digit by digit in a fixed base. The digit prefix
/// is cached and only ever grows, so refinement never revises emitted digits.
#[derive(Clone)]
pub struct StreamReal {
    inner: Arc<StreamInner>,
}

impl StreamReal {
    pub fn new(base: u32, source: DigitSource) -> Result<Self> {
        if !(2..=36).contains(&base) {
            return Err(Error::InvalidParameter(format!(
                "stream base must be in 2..=36, got {base}"
            )));
        }
        if let DigitSource::Digits { prefix, cycle } = &source {
            if let Some(d) = prefix.iter().chain(cycle).find(|&&d| u32::from(d) >= base) {
                return Err(Error::InvalidParameter(format!(
                    "digit {d} out of range for base {base}"
                )));
            }
        }
        Ok(StreamReal {
            inner: Arc::new(StreamInner {
                base,
                source,
                cache: Mutex::new(Vec::new()),
            }),
        })
    }

    pub fn from_fn(base: u32, f: impl Fn(usize) -> u8 + Send + Sync + 'static) -> Result<Self> {
        Self::new(base, DigitSource::Custom(DigitFn(Arc::new(f))))
    }

    /// Finitely many digits followed by zeros.
    pub fn terminating(base: u32, digits: &[u8]) -> Result<Self> {
        Self::periodic(base, digits, &[])
    }

    pub fn periodic(base: u32, prefix: &[u8], cycle: &[u8]) -> Result<Self> {
        Self::new(
            base,
            DigitSource::Digits {
                prefix: prefix.to_vec(),
                cycle: cycle.to_vec(),
            },
        )
    }

    pub fn base(&self) -> u32 {
        self.inner.base
    }

    pub fn source(&self) -> &DigitSource {
        &self.inner.source
    }

    pub fn digit(&self, k: usize) -> u8 {
        self.digits(k + 1)[k]
    }

    /// The first `k` digits.
    pub fn digits(&self, k: usize) -> Vec<u8> {
        let mut cache = self.inner.cache.lock();
        while cache.len() < k {
            let i = cache.len();
            let d = self.inner.source.digit(i);
            assert!(
                u32::from(d) < self.inner.base,
                "digit source produced {d} at index {i} for base {}",
                self.inner.base
            );
            cache.push(d);
        }
        cache[..k].to_vec()
    }

    /// Interval of width exactly `base^-k` containing the value.
    pub fn refine(&self, k: u32) -> Interval {
        let base = BigInt::from(self.inner.base);
        let mut n = BigInt::zero();
        for d in self.digits(k as usize) {
            n = n * &base + BigInt::from(d);
        }
        let denom = num_traits::pow(base, k as usize);
        let lo = Rational::new(n.clone(), denom.clone());
        let hi = Rational::new(n + BigInt::one(), denom);
        Interval::new(lo, hi)
    }

    /// The exact value, when the digit source is known to be eventually periodic.
    pub fn exact_value(&self) -> Option<Rational> {
        let (prefix, cycle) = self.inner.source.periodic_form()?;
        Some(periodic_value(self.inner.base, &prefix, &cycle))
    }

    pub fn ptr_eq(&self, other: &StreamReal) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

fn digits_to_int(base: &BigInt, digits: &[u8]) -> BigInt {
    digits
        .iter()
        .fold(BigInt::zero(), |acc, &d| acc * base + BigInt::from(d))
}

/// Value of `0.prefix(cycle)*` in the given base.
pub fn periodic_value(base: u32, prefix: &[u8], cycle: &[u8]) -> Rational {
    let b = BigInt::from(base);
    let p = digits_to_int(&b, prefix);
    let scale = Rational::from_integer(num_traits::pow(b.clone(), prefix.len()));
    let head = Rational::from_integer(p);
    if cycle.is_empty() || cycle.iter().all(|&d| d == 0) {
        return head / scale;
    }
    let c = digits_to_int(&b, cycle);
    let period = num_traits::pow(b, cycle.len()) - BigInt::one();
    (head + Rational::new(c, period)) / scale
}

impl PartialEq for StreamReal {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.inner.base == other.inner.base && self.inner.source == other.inner.source)
    }
}

impl fmt::Debug for StreamReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.digits(12);
        let digits: String = shown
            .iter()
            .map(|&d| std::char::from_digit(u32::from(d), 36).unwrap_or('?'))
            .collect();
        write!(f, "StreamReal(base {}, 0.{}...)", self.inner.base, digits)
    }
}
