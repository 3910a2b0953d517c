use compsys::classical::{ClassicalMap, SetExpr};
use compsys::numerics::{precision_cap, rat, Rational, RealValue};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small rationals so that points often land on boundaries.
fn quarter(rng: &mut ChaCha8Rng, range: i64) -> Rational {
    rat(rng.gen_range(-range..=range), 4)
}

/// Invertible affine map and its inverse: a diagonal scaling plus an optional shear.
fn affine_pair(rng: &mut ChaCha8Rng, dim: usize) -> (ClassicalMap, ClassicalMap) {
    let scales: Vec<Rational> = (0..dim)
        .map(|_| {
            let s = rat(rng.gen_range(1..=3), rng.gen_range(1..=2));
            if rng.gen() { -s } else { s }
        })
        .collect();
    let offsets: Vec<Rational> = (0..dim).map(|_| quarter(rng, 4)).collect();
    let shear = if dim > 1 { quarter(rng, 4) } else { Rational::zero() };
    // forward: y = S x + o, then y0 += shear * y1
    let mut a = vec![vec![Rational::zero(); dim]; dim];
    let mut b = offsets.clone();
    for i in 0..dim {
        a[i][i] = scales[i].clone();
    }
    if dim > 1 {
        a[0][1] = &shear * &scales[1];
        b[0] = &offsets[0] + &shear * &offsets[1];
    }
    // inverse: undo the shear, then the scaling
    let mut ai = vec![vec![Rational::zero(); dim]; dim];
    let mut bi = vec![Rational::zero(); dim];
    for i in 0..dim {
        ai[i][i] = scales[i].recip();
        bi[i] = -&offsets[i] / &scales[i];
    }
    if dim > 1 {
        ai[0][1] = -&shear / &scales[0];
    }
    (
        ClassicalMap::affine(&a, &b).expect("square"),
        ClassicalMap::affine(&ai, &bi).expect("square"),
    )
}

fn random_set(rng: &mut ChaCha8Rng, dim: usize, depth: usize) -> SetExpr {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        if dim == 1 && rng.gen() {
            let lo = rng.gen_bool(0.8).then(|| RealValue::from(quarter(rng, 8)));
            let hi = rng.gen_bool(0.8).then(|| RealValue::from(quarter(rng, 8)));
            return SetExpr::interval(lo, rng.gen(), hi, rng.gen());
        }
        let center: Vec<RealValue> = (0..dim).map(|_| quarter(rng, 6).into()).collect();
        let radius = RealValue::from(rat(rng.gen_range(0..=12), 4));
        return if rng.gen() {
            SetExpr::closed_ball(center, radius).unwrap()
        } else {
            SetExpr::open_ball(center, radius).unwrap()
        };
    }
    match rng.gen_range(0..5) {
        0 if dim > 1 => {
            let left = rng.gen_range(1..dim);
            SetExpr::product(random_set(rng, left, depth - 1), random_set(rng, dim - left, depth - 1))
        }
        0 | 1 => SetExpr::union(random_set(rng, dim, depth - 1), random_set(rng, dim, depth - 1)).unwrap(),
        2 => SetExpr::intersection(random_set(rng, dim, depth - 1), random_set(rng, dim, depth - 1)).unwrap(),
        3 => SetExpr::complement(random_set(rng, dim, depth - 1)),
        _ => {
            let (map, inverse) = affine_pair(rng, dim);
            SetExpr::preimage(map, inverse, random_set(rng, dim, depth - 1)).unwrap()
        }
    }
}

fn exact(v: &RealValue) -> Rational {
    v.as_exact().expect("generated sets are rational").clone()
}

/// Applies a map with rational coefficients and natural exponents by direct evaluation.
fn apply_exact(map: &ClassicalMap, x: &[Rational]) -> Vec<Rational> {
    map.components
        .iter()
        .map(|poly| {
            poly.terms
                .iter()
                .map(|t| {
                    t.exps.iter().zip(x).fold(exact(&t.coef), |acc, (q, xi)| {
                        let e = q.to_integer().to_usize().expect("natural exponent");
                        acc * num_traits::pow(xi.clone(), e)
                    })
                })
                .fold(Rational::zero(), |a, b| a + b)
        })
        .collect()
}

fn oracle(s: &SetExpr, x: &[Rational]) -> bool {
    match s {
        SetExpr::Ball { center, radius, closed } => {
            let d2 = center
                .iter()
                .zip(x)
                .fold(Rational::zero(), |acc, (c, xi)| {
                    let d = xi - exact(c);
                    acc + &d * &d
                });
            let r = exact(radius);
            let r2 = &r * &r;
            if *closed { d2 <= r2 } else { d2 < r2 }
        }
        SetExpr::Interval { lo, lo_closed, hi, hi_closed } => {
            let v = &x[0];
            let above = lo.as_ref().is_none_or(|l| {
                let l = exact(l);
                if *lo_closed { *v >= l } else { *v > l }
            });
            let below = hi.as_ref().is_none_or(|h| {
                let h = exact(h);
                if *hi_closed { *v <= h } else { *v < h }
            });
            above && below
        }
        SetExpr::Product(a, b) => {
            let k = a.dim();
            oracle(a, &x[..k]) && oracle(b, &x[k..])
        }
        SetExpr::Union(a, b) => oracle(a, x) || oracle(b, x),
        SetExpr::Intersection(a, b) => oracle(a, x) && oracle(b, x),
        SetExpr::Complement(a) => !oracle(a, x),
        SetExpr::Preimage { map, inner, .. } => oracle(inner, &apply_exact(map, x)),
    }
}

pub fn equivalence() -> super::Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5E7);
    let (mut inside, mut on_edge_sets) = (0, 0);
    for i in 0..1000 {
        let dim = rng.gen_range(1..=3);
        let set = random_set(&mut rng, dim, 4);
        let point: Vec<Rational> = (0..dim).map(|_| quarter(&mut rng, 8)).collect();
        let want = oracle(&set, &point);
        let reals: Vec<RealValue> = point.iter().cloned().map(RealValue::from).collect();
        let got = set.contains(&reals, precision_cap()).map_err(|e| format!("pair {i}: {e}"))?;
        if got != want {
            return Err(format!("pair {i}: membership {got}, exact evaluation {want} for {set:?} at {point:?}"));
        }
        inside += usize::from(want);
        if point.iter().any(|p| p.is_integer() && !p.is_negative()) {
            on_edge_sets += 1;
        }
    }
    Ok(format!("1000/1000 agree ({inside} inside, {on_edge_sets} points with a non-negative integer coordinate)"))
}
