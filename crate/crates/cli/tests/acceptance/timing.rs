use compsys::advice::{PrefixAdvice, Schedule, SymbolSource};
use compsys::gallery::{d_g, timing_binary_search};
use compsys::machine::Outcome;
use compsys::numerics::Rational;
use compsys::timed::timed_run;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

fn dyadic(bits: impl IntoIterator<Item = bool>) -> Rational {
    let mut x = Rational::zero();
    let mut w = Rational::one();
    for b in bits {
        w /= BigInt::from(2);
        if b {
            x += &w;
        }
    }
    x
}

pub fn binary_search() -> super::Outcome {
    const STREAMS: u64 = 25;
    const PHI_BITS: usize = 128;
    let (mut runs, mut exact, mut within_budget, mut timeouts) = (0, 0, 0, 0);
    let mut first_miss = None;
    let mut worst_ratio = 0.0f64;
    for l_max in 1..=12usize {
        let program = timing_binary_search(l_max, 0).map_err(|e| e.to_string())?;
        let budget = 8u64 << l_max;
        for seed in 0..STREAMS {
            let g = PrefixAdvice::new(SymbolSource::Prng { seed: 9000 + seed }, Schedule::Identity);
            let system = d_g(&g).map_err(|e| e.to_string())?;
            let r = timed_run(&program, &system, "", 64 * budget).map_err(|e| e.to_string())?;
            runs += 1;
            let want = g.source.symbols(l_max);
            if r.outcome == Outcome::Accept && r.tape.contents() == want {
                exact += 1;
            } else if first_miss.is_none() {
                first_miss = Some(format!("L = {l_max}, seed {seed}: {} instead of {want}", r.tape.contents()));
            }
            if r.steps <= budget {
                within_budget += 1;
            }
            worst_ratio = worst_ratio.max(r.steps as f64 / budget as f64);

            // phi_g lies in [lo, lo + 2^-PHI_BITS]
            let phi_lo = dyadic(g.source.symbols(PHI_BITS).chars().map(|c| c == '1'));
            let phi_w = dyadic((0..PHI_BITS).map(|i| i + 1 == PHI_BITS));
            let mut digits = Vec::new();
            for e in r.trace.iter().filter(|e| e.state.starts_with('P')) {
                let Ok(l) = e.state[1..].parse::<usize>() else { continue };
                if l != digits.len() {
                    return Err(format!("L = {l_max}, seed {seed}: poll for round {l} after {} digits", digits.len()));
                }
                if e.element == "EMPTY" {
                    timeouts += 1;
                    // z_l = 0.a_1 ... a_l 1
                    let z = dyadic(digits.iter().copied().chain([true]));
                    let bound = dyadic((0..=l).map(|i| i == l));
                    let far = (&z - &phi_lo).abs().max((&z - (&phi_lo + &phi_w)).abs());
                    if far > bound {
                        return Err(format!(
                            "L = {l_max}, seed {seed}, round {l}: timeout with |z - phi| possibly above 2^-{}",
                            l + 1
                        ));
                    }
                }
                digits.push(e.element != "high");
            }
        }
    }
    let detail = format!(
        "exact {exact}/{runs}, within 8*2^L {within_budget}/{runs} (worst {worst_ratio:.2} of budget), \
         timeout checks {timeouts}/{timeouts}"
    );
    if exact == runs && within_budget == runs {
        Ok(detail)
    } else {
        Err(format!("{detail}; first miss {}", first_miss.unwrap_or_default()))
    }
}

