use std::time::Instant;

use compsys::advice::{PrefixAdvice, Schedule, SymbolSource};
use compsys::gallery::{c_g, c_phi, extract_binary_digits, extract_ternary_advice};
use compsys::machine::{run, Configuration, Outcome};
use compsys::numerics::{rat, Rational, RealValue};
use compsys::timed::{kappa_eval, timed_run, ExtNat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prng_advice(seed: u64) -> PrefixAdvice {
    PrefixAdvice::new(SymbolSource::Prng { seed }, Schedule::Identity)
}

pub fn binary_extraction() -> super::Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC1);
    let program = extract_binary_digits(16).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut max_steps = 0;
    for _ in 0..100 {
        let q: u64 = rng.gen_range(1..=1 << 16);
        let p: u64 = rng.gen_range(0..q);
        let want = format!("{:016b}", (p << 16) / q);
        let system = c_phi(RealValue::ratio(p as i64, q as i64)).map_err(|e| e.to_string())?;
        let r = run(&program, &system, "", 1_000).map_err(|e| e.to_string())?;
        let got = r.tape.contents();
        if r.outcome != Outcome::Accept || got != want {
            return Err(format!("{p}/{q}: {:?} with tape {got}, expected {want}", r.outcome));
        }
        if r.steps > 4 * 16 + 8 {
            return Err(format!("{p}/{q}: {} rule applications", r.steps));
        }
        max_steps = max_steps.max(r.steps);
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 5.0 {
        return Err(format!("100 runs took {secs:.2}s"));
    }
    Ok(format!("100/100 exact, max {max_steps} steps (limit 72), {secs:.2}s"))
}

/// Base-3 digits of `T^l(psi_g)`, computed from the advice symbols directly.
fn orbit_digits(g: &PrefixAdvice, l: usize, count: usize) -> Vec<u8> {
    (l..l + count)
        .map(|k| if k % 2 == 1 { 2 } else { u8::from(g.source.symbol(k / 2) == '1') })
        .collect()
}

/// Lower bound on the distance from `0.d1 d2 ...` (base 3) to the nearest `k/3`.
fn separation_lower_bound(digits: &[u8]) -> Rational {
    let mut lo = Rational::zero();
    let mut w = Rational::one();
    for &d in digits {
        w /= BigInt::from(3);
        lo += &w * BigInt::from(d);
    }
    let hi = &lo + &w;
    (0..4)
        .map(|k| {
            let p = rat(k, 3);
            if p < lo {
                &lo - &p
            } else if p > hi {
                &p - &hi
            } else {
                Rational::zero()
            }
        })
        .min()
        .expect("four reference points")
}

pub fn ternary_separation() -> super::Outcome {
    let (even_bound, odd_bound) = (rat(1, 27), rat(2, 27));
    let (mut min_even, mut min_odd) = (Rational::one(), Rational::one());
    let mut max_kappa = 0u64;
    for seed in 0..50 {
        let g = prng_advice(1000 + seed);
        for l in 0..=200 {
            let d = separation_lower_bound(&orbit_digits(&g, l, 24));
            let (bound, min) = if l % 2 == 0 { (&even_bound, &mut min_even) } else { (&odd_bound, &mut min_odd) };
            if d <= *bound {
                return Err(format!("seed {seed}, l = {l}: distance bound {d} does not exceed {bound}"));
            }
            if d < *min {
                *min = d;
            }
        }
        let system = c_g(&g).map_err(|e| e.to_string())?;
        let base = &system.base;
        let (meas, spec, t) = (
            base.partition("alpha").unwrap(),
            system.kappa("alpha").unwrap(),
            base.transformation("T").unwrap(),
        );
        let mut config: Configuration = base.initial.clone();
        for l in 0..=200 {
            let k = kappa_eval(spec, meas, &config).map_err(|e| e.to_string())?;
            match k {
                ExtNat::Finite(_) if k <= ExtNat::from_u64(27) => max_kappa = max_kappa.max(k.as_u64().unwrap()),
                _ => return Err(format!("seed {seed}, l = {l}: kappa {k} exceeds 27")),
            }
            config = t.apply(&config, 64).map_err(|e| e.to_string())?;
        }
    }
    Ok(format!(
        "50 streams x 201 orbit points, min distance bounds {:.4} (even) {:.4} (odd), max kappa {max_kappa}",
        approx(&min_even),
        approx(&min_odd)
    ))
}

fn approx(r: &Rational) -> f64 {
    RealValue::Exact(r.clone()).approx_f64()
}

pub fn ternary_budget() -> super::Outcome {
    let mut worst = (0u64, 1usize);
    for m in 1..=100usize {
        let g = prng_advice(5000 + m as u64);
        let system = c_g(&g).map_err(|e| e.to_string())?;
        let program = extract_ternary_advice(m).map_err(|e| e.to_string())?;
        let budget = 28 * 2 * m as u64;
        let r = timed_run(&program, &system, "", 2 * budget).map_err(|e| e.to_string())?;
        let want = g.source.symbols(m);
        if r.outcome != Outcome::Accept || r.tape.contents() != want {
            return Err(format!("m = {m}: {:?}, tape {} expected {want}", r.outcome, r.tape.contents()));
        }
        if r.steps > budget {
            return Err(format!("m = {m}: {} rule applications exceed {budget}", r.steps));
        }
        if r.steps * worst.1 as u64 > worst.0 * m as u64 {
            worst = (r.steps, m);
        }
    }
    Ok(format!(
        "m = 1..100 recovered exactly, worst {} steps for m = {} ({:.1} per symbol, limit 56)",
        worst.0,
        worst.1,
        worst.0 as f64 / worst.1 as f64
    ))
}
