use compsys::advice::{encode_source, partition_count, prefixize, AdviceFunction, EncodingScheme, Growth, SymbolSource};
use compsys::numerics::{Rational, RealValue};
use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Counts non-decreasing tuples of length `len` over `1..=n` by stepping through them.
fn enumerate_tuples(n: usize, len: usize) -> u64 {
    let mut t = vec![1usize; len];
    let mut count = 0;
    loop {
        count += 1;
        let Some(i) = (0..len).rev().find(|&i| t[i] < n) else { return count };
        t[i] += 1;
        let v = t[i];
        t[i + 1..].iter_mut().for_each(|x| *x = v);
    }
}

pub fn partition_counts() -> super::Outcome {
    for n in 1..=10 {
        for k in 1..=10 {
            let want = BigUint::from(enumerate_tuples(n, k - 1));
            let got = partition_count(n, k);
            if got != want {
                return Err(format!("p({n},{k}) = {got}, enumeration gives {want}"));
            }
        }
    }
    for n in 1..=20usize {
        for k in 1..=20usize {
            let bound = num_traits::pow(BigUint::from(n + 1), k);
            if partition_count(n, k) > bound {
                return Err(format!("p({n},{k}) exceeds (n+1)^k"));
            }
        }
    }
    Ok("100 values match enumeration; p(n,k) <= (n+1)^k for n,k <= 20".into())
}

fn random_function(seed: u64) -> AdviceFunction {
    AdviceFunction::new(&['0', '1'], Growth::Other, move |n| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(1 << 20) ^ n as u64);
        let len = rng.gen_range(0..=4);
        (0..len).map(|_| if rng.gen() { '1' } else { '0' }).collect()
    })
    .expect("binary alphabet")
}

/// Expansion of `x` in `[0, 1)` to `count` digits by exact long division.
fn expand(mut x: Rational, base: u32, count: usize) -> Vec<u8> {
    let b = BigInt::from(base);
    (0..count)
        .map(|_| {
            x *= &b;
            let d = x.floor();
            x -= &d;
            d.to_integer().to_u8().expect("digit below base")
        })
        .collect()
}

fn decode(digits: &[u8], scheme: EncodingScheme) -> Option<String> {
    let bit = |d: u8| match d {
        0 => Some('0'),
        1 => Some('1'),
        _ => None,
    };
    match scheme {
        EncodingScheme::Binary => digits.iter().map(|&d| bit(d)).collect(),
        EncodingScheme::TernaryInterleaved => digits
            .chunks(2)
            .map(|pair| if pair.get(1).is_some_and(|&d| d != 2) { None } else { bit(pair[0]) })
            .collect(),
    }
}

pub fn prefixization() -> super::Outcome {
    let mut pairs = 0;
    for seed in 0..20 {
        let g = prefixize(&random_function(seed));
        let words: Vec<String> = (0..=64).map(|n| g.advice(n)).collect();
        for n in 1..=64 {
            for m in 0..n {
                if !words[n].starts_with(&words[m]) {
                    return Err(format!("function {seed}: g({m}) is not a prefix of g({n})"));
                }
                pairs += 1;
            }
        }
    }

    const DIGITS: usize = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(0xE6);
    let mut sources: Vec<SymbolSource> = (0..10).map(|s| SymbolSource::Prng { seed: 700 + s }).collect();
    for _ in 0..10 {
        let word = |rng: &mut ChaCha8Rng, len| -> String {
            (0..len).map(|_| if rng.gen() { '1' } else { '0' }).collect()
        };
        let (prefix_len, cycle_len) = (rng.gen_range(0..40), rng.gen_range(0..12));
        let prefix = word(&mut rng, prefix_len);
        let cycle = format!("0{}", word(&mut rng, cycle_len));
        sources.push(SymbolSource::word(&prefix, &cycle));
    }
    for source in &sources {
        for scheme in [EncodingScheme::Binary, EncodingScheme::TernaryInterleaved] {
            let per_symbol = if scheme == EncodingScheme::Binary { 1 } else { 2 };
            let n = DIGITS * per_symbol;
            let real = RealValue::Stream(encode_source(source, scheme).map_err(|e| e.to_string())?);
            let enclosure = real.enclose(n as u32 + 8).ok_or("no enclosure")?;
            let width = enclosure.width();
            if width > Rational::zero() && width * num_traits::pow(BigInt::from(scheme.base()), n + 1) > Rational::from_integer(1.into()) {
                return Err("enclosure too wide to decode".into());
            }
            let decoded = decode(&expand(enclosure.lo().clone(), scheme.base(), n), scheme);
            let want = source.symbols(DIGITS);
            if decoded.as_deref() != Some(want.as_str()) {
                return Err(format!("{source:?} under {}: decoded {decoded:?}", scheme.name()));
            }
        }
    }
    Ok(format!(
        "{pairs} prefix pairs over 20 functions; 20 streams round-trip both encoders to {DIGITS} symbols"
    ))
}
