//! Helpers over arbitrary-precision rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational in canonical form (gcd 1, positive denominator).
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn pow2(exp: u32) -> BigInt {
    BigInt::one() << exp as usize
}

/// Integer power with a possibly negative exponent. `None` for `0^negative`.
pub fn pow_i64(x: &Rational, exp: i64) -> Option<Rational> {
    if exp >= 0 {
        Some(num_traits::pow(x.clone(), exp as usize))
    } else if x.is_zero() {
        None
    } else {
        Some(num_traits::pow(x.recip(), exp.unsigned_abs() as usize))
    }
}

/// Exact `index`-th root of a non-negative integer, if it is a perfect power.
fn exact_int_root(n: &BigInt, index: u32) -> Option<BigInt> {
    let r = n.nth_root(index);
    if num_traits::pow(r.clone(), index as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// The real `index`-th root of `x` when it is rational. Negative radicands only
/// have a real root for odd indices.
pub fn exact_root(x: &Rational, index: u32) -> Option<Rational> {
    if x.is_negative() {
        if index % 2 == 0 {
            return None;
        }
        return exact_root(&-x, index).map(|r| -r);
    }
    let n = exact_int_root(x.numer(), index)?;
    let d = exact_int_root(x.denom(), index)?;
    Some(Rational::new(n, d))
}

/// `floor(root(|x|) * 2^bits)` for a non-negative rational, exactly.
fn floor_scaled_root(x: &Rational, index: u32, bits: u32) -> BigInt {
    // floor(r^(1/n)) == floor(floor(r)^(1/n)) for r >= 0.
    let scaled = x * Rational::from_integer(pow2(bits * index));
    scaled.floor().to_integer().nth_root(index)
}

/// Lower and upper dyadic bounds, `2^-bits` apart at most, for the real
/// `index`-th root of `x` (odd index for negative `x`).
pub fn root_bounds(x: &Rational, index: u32, bits: u32) -> (Rational, Rational) {
    if let Some(r) = exact_root(x, index) {
        return (r.clone(), r);
    }
    let scale = Rational::from_integer(pow2(bits));
    if x.is_negative() {
        let (lo, hi) = root_bounds(&-x, index, bits);
        return (-hi, -lo);
    }
    let f = floor_scaled_root(x, index, bits);
    let lo = Rational::from_integer(f.clone()) / &scale;
    let hi = Rational::from_integer(f + 1) / scale;
    (lo, hi)
}

/// Number of bits needed to bound `|x|` from above by a power of two.
pub fn magnitude_bits(x: &Rational) -> u32 {
    let c = x.abs().ceil().to_integer();
    c.bits() as u32
}

pub fn ceil_to_biguint(x: &Rational) -> BigUint {
    let c = x.ceil().to_integer();
    match c.sign() {
        Sign::Minus => BigUint::zero(),
        _ => c.to_biguint().unwrap_or_default(),
    }
}

/// Decimal rendering truncated toward -inf (`round_up == false`) or +inf.
pub fn to_decimal(x: &Rational, places: usize, round_up: bool) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = x * Rational::from_integer(scale.clone());
    let n = if round_up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    let negative = n.is_negative();
    let (q, r) = n.abs().div_rem(&scale);
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    out.push_str(&q.to_string());
    if places > 0 {
        out.push('.');
        out.push_str(&format!("{:0>width$}", r.to_string(), width = places));
    }
    out
}

/// Approximate conversion for display and sampling only.
pub fn approx_f64(x: &Rational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Simplest rational (smallest denominator, then smallest magnitude) in the
/// interval between `lo` and `hi` with the given closedness. Either bound may
/// be absent for an unbounded side. Returns `None` for an empty interval.
pub fn simplest_between(
    lo: Option<(&Rational, bool)>,
    hi: Option<(&Rational, bool)>,
) -> Option<Rational> {
    match (lo, hi) {
        (None, None) => Some(Rational::zero()),
        (Some((l, lc)), None) => {
            if l.is_negative() || (l.is_zero() && lc) {
                return Some(Rational::zero()).filter(|z| z > l || (lc && z == l));
            }
            let f = l.floor();
            Some(if &f == l && lc { f } else { f + Rational::one() })
        }
        (None, Some((h, hc))) => simplest_between(Some((&-h, hc)), None).map(|r| -r),
        (Some((l, lc)), Some((h, hc))) => {
            if l > h || (l == h && !(lc && hc)) {
                return None;
            }
            if l == h {
                return Some(l.clone());
            }
            if l.is_negative() && h.is_positive() {
                return Some(Rational::zero());
            }
            if h.is_negative() || (h.is_zero() && !hc) {
                return simplest_between(Some((&-h, hc)), Some((&-l, lc))).map(|r| -r);
            }
            if l.is_zero() && lc {
                return Some(Rational::zero());
            }
            Some(simplest_positive(l, lc, h, hc))
        }
    }
}

/// Stern-Brocot descent for `0 <= l < h`.
fn simplest_positive(l: &Rational, lc: bool, h: &Rational, hc: bool) -> Rational {
    let inside = |x: &Rational| (x > l || (lc && x == l)) && (x < h || (hc && x == h));
    let fl = l.floor();
    // An integer in range wins immediately.
    let mut candidate = fl.clone();
    while candidate <= *h {
        if inside(&candidate) {
            return candidate;
        }
        candidate += Rational::one();
    }
    // Same integer part: recurse on reciprocals of the fractional parts.
    let lf = l - &fl;
    let hf = h - &fl;
    // lf in [0,1), hf in (lf, 1); reciprocal reverses the order.
    let inner = if lf.is_zero() {
        simplest_between(Some((&hf.recip(), hc)), None)
    } else {
        simplest_between(Some((&hf.recip(), hc)), Some((&lf.recip(), lc)))
    }
    .expect("non-empty reciprocal interval");
    fl + inner.recip()
}
