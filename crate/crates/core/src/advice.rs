//! Advice functions, prefix advice streams and their real-number encodings.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use parking_lot::Mutex;

use crate::error::{Error, Result};
use crate::numerics::{DigitSource, Rational, StreamReal};

/// Separator inserted between blocks by [`prefixize`]; never part of a user alphabet.
pub const SEPARATOR: char = 'e';

/// Symbol generator compared by identity.
#[derive(Clone)]
pub struct SymbolFn {
    pub f: Arc<dyn Fn(usize) -> char + Send + Sync>,
    pub alphabet: Vec<char>,
}

impl fmt::Debug for SymbolFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolFn({:p}, {:?})", Arc::as_ptr(&self.f), self.alphabet)
    }
}

impl PartialEq for SymbolFn {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.f, &other.f)
    }
}

/// An infinite symbol stream `h(∞)`.
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolSource {
    /// Pseudo-random binary symbols, random access by index.
    Prng { seed: u64 },
    /// `prefix` then `cycle` forever; an empty cycle continues with '0'.
    Word { prefix: Vec<char>, cycle: Vec<char> },
    /// Blocks read from a text file, one line per block, followed by '0' forever.
    File { path: String, symbols: Arc<Vec<char>> },
    /// The stream `f(0) e f(1) e f(2) ...` of a prefixized advice function.
    Prefixized(AdviceFunction),
    Custom(SymbolFn),
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SymbolSource {
    pub fn word(prefix: &str, cycle: &str) -> Self {
        SymbolSource::Word {
            prefix: prefix.chars().collect(),
            cycle: cycle.chars().collect(),
        }
    }

    pub fn from_fn(alphabet: &[char], f: impl Fn(usize) -> char + Send + Sync + 'static) -> Self {
        SymbolSource::Custom(SymbolFn {
            f: Arc::new(f),
            alphabet: alphabet.to_vec(),
        })
    }

    /// Parse file contents: every line is a block, whitespace is dropped.
    pub fn from_file_contents(path: &str, text: &str) -> Self {
        let symbols: Vec<char> = text
            .lines()
            .flat_map(|line| line.chars().filter(|c| !c.is_whitespace()))
            .collect();
        SymbolSource::File {
            path: path.to_string(),
            symbols: Arc::new(symbols),
        }
    }

    pub fn from_file(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        Ok(Self::from_file_contents(path, &text))
    }

    pub fn symbol(&self, k: usize) -> char {
        match self {
            SymbolSource::Prng { seed } => {
                let word = splitmix64(seed ^ splitmix64(k as u64 / 64));
                if (word >> (k % 64)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            }
            SymbolSource::Word { prefix, cycle } => {
                if k < prefix.len() {
                    prefix[k]
                } else if cycle.is_empty() {
                    '0'
                } else {
                    cycle[(k - prefix.len()) % cycle.len()]
                }
            }
            SymbolSource::File { symbols, .. } => symbols.get(k).copied().unwrap_or('0'),
            SymbolSource::Prefixized(f) => f.stream_symbol(k),
            SymbolSource::Custom(s) => (s.f)(k),
        }
    }

    pub fn symbols(&self, n: usize) -> String {
        (0..n).map(|k| self.symbol(k)).collect()
    }

    /// Symbols the stream may produce.
    pub fn alphabet(&self) -> Vec<char> {
        let set: BTreeSet<char> = match self {
            SymbolSource::Prng { .. } => ['0', '1'].into_iter().collect(),
            SymbolSource::Word { prefix, cycle } => {
                let mut s: BTreeSet<char> = prefix.iter().chain(cycle).copied().collect();
                if cycle.is_empty() {
                    s.insert('0');
                }
                s
            }
            SymbolSource::File { symbols, .. } => {
                symbols.iter().copied().chain(std::iter::once('0')).collect()
            }
            SymbolSource::Prefixized(f) => f
                .alphabet()
                .iter()
                .copied()
                .chain(std::iter::once(SEPARATOR))
                .collect(),
            SymbolSource::Custom(s) => s.alphabet.iter().copied().collect(),
        };
        set.into_iter().collect()
    }

    /// `(prefix, cycle)` with a non-empty cycle, when the stream is known to be
    /// eventually periodic.
    pub fn periodic_form(&self) -> Option<(Vec<char>, Vec<char>)> {
        match self {
            SymbolSource::Word { prefix, cycle } => {
                let cycle = if cycle.is_empty() { vec!['0'] } else { cycle.clone() };
                Some((prefix.clone(), cycle))
            }
            SymbolSource::File { symbols, .. } => Some((symbols.to_vec(), vec!['0'])),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EncodingScheme {
    /// Digit k is symbol k, base 2.
    Binary,
    /// Digits alternate symbol k and 2, base 3.
    TernaryInterleaved,
}

impl EncodingScheme {
    pub fn name(self) -> &'static str {
        match self {
            EncodingScheme::Binary => "binary",
            EncodingScheme::TernaryInterleaved => "ternary-interleaved",
        }
    }

    pub fn base(self) -> u32 {
        match self {
            EncodingScheme::Binary => 2,
            EncodingScheme::TernaryInterleaved => 3,
        }
    }

    fn bit(self, c: char) -> u8 {
        match c {
            '0' => 0,
            '1' => 1,
            other => panic!("symbol {other:?} cannot be encoded by the {} scheme", self.name()),
        }
    }

    pub fn digit(self, symbols: &SymbolSource, k: usize) -> u8 {
        match self {
            EncodingScheme::Binary => self.bit(symbols.symbol(k)),
            EncodingScheme::TernaryInterleaved if k % 2 == 1 => 2,
            EncodingScheme::TernaryInterleaved => self.bit(symbols.symbol(k / 2)),
        }
    }

    fn encode_all(self, symbols: &[char]) -> Vec<u8> {
        symbols
            .iter()
            .flat_map(|&c| match self {
                EncodingScheme::Binary => vec![self.bit(c)],
                EncodingScheme::TernaryInterleaved => vec![self.bit(c), 2],
            })
            .collect()
    }

    pub fn periodic_digits(self, prefix: &[char], cycle: &[char]) -> (Vec<u8>, Vec<u8>) {
        (self.encode_all(prefix), self.encode_all(cycle))
    }
}

/// Declared growth of an advice function's output length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Growth {
    /// `|f(n)| <= c * max(n, 1)^a`
    Poly { c: u64, a: u32 },
    /// `|f(n)| <= c * ceil(log2(n))` for n >= 2, and `<= c` below.
    Log { c: u64 },
    Other,
}

impl Growth {
    pub fn admits(&self, n: usize, len: usize) -> bool {
        let len = BigUint::from(len);
        match self {
            Growth::Poly { c, a } => {
                len <= BigUint::from(*c) * num_traits::pow(BigUint::from(n.max(1)), *a as usize)
            }
            Growth::Log { c } => {
                let l = if n < 2 { 1 } else { ceil_log2(n) };
                len <= BigUint::from(*c) * BigUint::from(l)
            }
            Growth::Other => true,
        }
    }

    /// Growth of the prefixized function.
    pub fn raised(&self) -> Growth {
        match self {
            Growth::Poly { c, a } => Growth::Poly { c: c + 1, a: a + 1 },
            _ => Growth::Other,
        }
    }
}

fn ceil_log2(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

struct PrefixCache {
    stream: Vec<char>,
    /// `ends[n] = |g(n)|`
    ends: Vec<usize>,
}

struct AdviceInner {
    eval: Arc<dyn Fn(usize) -> String + Send + Sync>,
    growth: Growth,
    alphabet: Vec<char>,
    cache: Mutex<PrefixCache>,
}

/// A total map from input length to advice word.
#[derive(Clone)]
pub struct AdviceFunction {
    inner: Arc<AdviceInner>,
}

impl AdviceFunction {
    pub fn new(
        alphabet: &[char],
        growth: Growth,
        eval: impl Fn(usize) -> String + Send + Sync + 'static,
    ) -> Result<Self> {
        if alphabet.contains(&SEPARATOR) {
            return Err(Error::InvalidParameter(format!(
                "{SEPARATOR:?} is reserved as the prefix separator"
            )));
        }
        Ok(AdviceFunction {
            inner: Arc::new(AdviceInner {
                eval: Arc::new(eval),
                growth,
                alphabet: alphabet.to_vec(),
                cache: Mutex::new(PrefixCache {
                    stream: Vec::new(),
                    ends: Vec::new(),
                }),
            }),
        })
    }

    pub fn eval(&self, n: usize) -> String {
        (self.inner.eval)(n)
    }

    pub fn growth(&self) -> &Growth {
        &self.inner.growth
    }

    pub fn alphabet(&self) -> &[char] {
        &self.inner.alphabet
    }

    /// First `n` where the declared growth or alphabet is violated, among `0..samples`.
    pub fn check(&self, samples: usize) -> Option<usize> {
        (0..samples).find(|&n| {
            let w = self.eval(n);
            !self.inner.growth.admits(n, w.chars().count())
                || w.chars().any(|c| !self.inner.alphabet.contains(&c))
        })
    }

    fn extend_to(&self, cache: &mut PrefixCache, done: impl Fn(&PrefixCache) -> bool) {
        while !done(cache) {
            let n = cache.ends.len();
            if n > 0 {
                cache.stream.push(SEPARATOR);
            }
            cache.stream.extend(self.eval(n).chars());
            cache.ends.push(cache.stream.len());
        }
    }

    fn stream_symbol(&self, k: usize) -> char {
        let mut cache = self.inner.cache.lock();
        self.extend_to(&mut cache, |c| c.stream.len() > k);
        cache.stream[k]
    }

    fn prefix_len(&self, n: usize) -> usize {
        let mut cache = self.inner.cache.lock();
        self.extend_to(&mut cache, |c| c.ends.len() > n);
        cache.ends[n]
    }
}

impl fmt::Debug for AdviceFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "AdviceFunction({:p}, {:?})",
            Arc::as_ptr(&self.inner),
            self.inner.growth
        )
    }
}

impl PartialEq for AdviceFunction {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }
}

/// How many stream symbols form the advice for input length n.
#[derive(Clone, Debug, PartialEq)]
pub enum Schedule {
    Identity,
    /// `ceil(c * log2 n)`, zero for n <= 1.
    Log(Rational),
    /// Block boundaries of a prefixized function.
    Prefixized(AdviceFunction),
}

impl Schedule {
    pub fn length(&self, n: usize) -> usize {
        match self {
            Schedule::Identity => n,
            Schedule::Log(c) => ceil_c_log2(c, n),
            Schedule::Prefixized(f) => f.prefix_len(n),
        }
    }
}

/// Smallest L with `L >= c * log2 n`, computed exactly as `2^(qL) >= n^p` for `c = p/q`.
pub fn ceil_c_log2(c: &Rational, n: usize) -> usize {
    if n <= 1 || !c.is_positive() {
        return 0;
    }
    let p = c.numer().to_biguint().expect("positive");
    let q = c.denom().to_biguint().expect("positive");
    let q: usize = q.try_into().expect("denominator fits in usize");
    let p: usize = p.try_into().expect("numerator fits in usize");
    let target = num_traits::pow(BigInt::from(n), p);
    let mut l = 0usize;
    while (BigInt::one() << (q * l)) < target {
        l += 1;
    }
    l
}

/// A prefix advice: `g(n)` is the first `schedule(n)` symbols of one stream.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixAdvice {
    pub source: SymbolSource,
    pub schedule: Schedule,
}

impl PrefixAdvice {
    pub fn new(source: SymbolSource, schedule: Schedule) -> Self {
        PrefixAdvice { source, schedule }
    }

    pub fn advice(&self, n: usize) -> String {
        self.source.symbols(self.schedule.length(n))
    }

    pub fn alphabet(&self) -> Vec<char> {
        self.source.alphabet()
    }
}

/// `g(0) = f(0)`, `g(n+1) = g(n) e f(n+1)`.
pub fn prefixize(f: &AdviceFunction) -> PrefixAdvice {
    PrefixAdvice::new(
        SymbolSource::Prefixized(f.clone()),
        Schedule::Prefixized(f.clone()),
    )
}

/// The real whose digits encode the advice stream under `scheme`.
pub fn encode_advice_real(g: &PrefixAdvice, scheme: EncodingScheme) -> Result<StreamReal> {
    encode_source(&g.source, scheme)
}

pub fn encode_source(source: &SymbolSource, scheme: EncodingScheme) -> Result<StreamReal> {
    if let Some(&symbol) = source.alphabet().iter().find(|&&c| c != '0' && c != '1') {
        return Err(Error::SymbolOutsideScheme {
            symbol,
            scheme: scheme.name(),
        });
    }
    StreamReal::new(
        scheme.base(),
        DigitSource::Encoded {
            symbols: source.clone(),
            scheme,
        },
    )
}

/// `p(n, 1) = 1`, `p(n, k) = sum_{l=1..n} p(l, k-1)`.
pub fn partition_count(n: usize, k: usize) -> BigUint {
    assert!(n >= 1 && k >= 1, "partition_count needs n, k >= 1");
    // row[l-1] = p(l, j) for the current j
    let mut row = vec![BigUint::one(); n];
    for _ in 1..k {
        let mut acc = BigUint::zero();
        for cell in row.iter_mut() {
            acc += &*cell;
            *cell = acc.clone();
        }
    }
    row[n - 1].clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rat, Interval};

    #[test]
    fn prefixize_example() {
        let f = AdviceFunction::new(&['a', 'b', 'c'], Growth::Other, |n| match n {
            0 => "a".into(),
            1 => "bc".into(),
            _ => "".into(),
        })
        .unwrap();
        let g = prefixize(&f);
        assert_eq!(g.advice(0), "a");
        assert_eq!(g.advice(1), "aebc");
        assert_eq!(g.advice(3), "aebcee");
    }

    #[test]
    fn empty_function_gives_separators() {
        let f = AdviceFunction::new(&[], Growth::Other, |_| String::new()).unwrap();
        assert_eq!(prefixize(&f).advice(4), "eeee");
    }

    #[test]
    fn separator_is_reserved() {
        assert!(AdviceFunction::new(&['e'], Growth::Other, |_| String::new()).is_err());
    }

    #[test]
    fn encodings() {
        let g = PrefixAdvice::new(SymbolSource::word("101", ""), Schedule::Identity);
        let s = encode_advice_real(&g, EncodingScheme::Binary).unwrap();
        assert_eq!(s.refine(3), Interval::new(rat(5, 8), rat(6, 8)));
        let t = encode_source(&SymbolSource::word("10", ""), EncodingScheme::TernaryInterleaved)
            .unwrap();
        assert_eq!(t.digits(4), vec![1, 2, 0, 2]);
        assert_eq!(t.refine(2), Interval::new(rat(5, 9), rat(6, 9)));
        let z = encode_source(&SymbolSource::word("", "0"), EncodingScheme::Binary).unwrap();
        assert_eq!(z.refine(7), Interval::new(rat(0, 1), rat(1, 128)));
    }

    #[test]
    fn foreign_symbols_rejected() {
        let err = encode_source(&SymbolSource::word("12", ""), EncodingScheme::Binary);
        assert!(matches!(err, Err(Error::SymbolOutsideScheme { symbol: '2', .. })));
    }

    #[test]
    fn periodic_sources_have_exact_values() {
        let s = encode_source(&SymbolSource::word("1", "01"), EncodingScheme::Binary).unwrap();
        // 0.1(01)* = 1/2 + 1/6
        assert_eq!(s.exact_value(), Some(rat(2, 3)));
        let p = encode_source(&SymbolSource::Prng { seed: 3 }, EncodingScheme::Binary).unwrap();
        assert_eq!(p.exact_value(), None);
    }

    #[test]
    fn file_blocks_concatenate() {
        let s = SymbolSource::from_file_contents("mem", "10\n 1 1\n\n0\n");
        assert_eq!(s.symbols(7), "1011000");
    }

    #[test]
    fn counts() {
        assert_eq!(partition_count(5, 1), BigUint::from(1u32));
        assert_eq!(partition_count(3, 2), BigUint::from(3u32));
        assert_eq!(partition_count(1, 7), BigUint::from(1u32));
    }

    #[test]
    fn log_schedule_is_exact() {
        assert_eq!(ceil_c_log2(&rat(1, 1), 8), 3);
        assert_eq!(ceil_c_log2(&rat(1, 1), 9), 4);
        assert_eq!(ceil_c_log2(&rat(1, 2), 16), 2);
        assert_eq!(ceil_c_log2(&rat(3, 2), 5), 4);
        assert_eq!(ceil_c_log2(&rat(1, 1), 1), 0);
    }

    #[test]
    fn growth_checks() {
        let f = AdviceFunction::new(&['1'], Growth::Poly { c: 1, a: 1 }, |n| "1".repeat(n)).unwrap();
        assert_eq!(f.check(50), None);
        let g = AdviceFunction::new(&['1'], Growth::Log { c: 1 }, |n| "1".repeat(n)).unwrap();
        assert!(g.check(50).is_some());
        assert_eq!(Growth::Poly { c: 2, a: 1 }.raised(), Growth::Poly { c: 3, a: 2 });
    }
}
