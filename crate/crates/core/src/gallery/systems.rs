use crate::advice::{encode_advice_real, EncodingScheme, PrefixAdvice};
use crate::classical::{ClassicalMap, MultiPoly, Partition, PiecewiseMap, SetExpr, Term};
use crate::error::{Error, Result};
use crate::machine::{Configuration, Measurement, Predicate, Space, SystemDef, TapeConfig, TapeOp, Transformation, BLANK};
use crate::numerics::{int, rat, Rational, RealValue};
use crate::timed::{KappaSpec, TimedSystem};

fn unit_half_open() -> SetExpr {
    SetExpr::half_open(int(0), int(1))
}

/// `x -> b x - k` on `[k/b, (k+1)/b)` for each digit `k`.
fn shift_map(base: i64) -> Result<PiecewiseMap> {
    let cases = (0..base)
        .map(|k| {
            let region = SetExpr::half_open(rat(k, base), rat(k + 1, base));
            (region, ClassicalMap::affine_1d(int(base), int(-k)))
        })
        .collect();
    PiecewiseMap::new(cases, unit_half_open())
}

fn digit_cells(base: i64, prefix: &str) -> Result<Partition> {
    let elements = (0..base)
        .map(|k| (format!("{prefix}{k}"), SetExpr::half_open(rat(k, base), rat(k + 1, base))))
        .collect();
    Partition::new(elements, unit_half_open())
}

fn tape_ops(alphabet: &[char]) -> Vec<(String, Transformation)> {
    let mut ops = vec![
        ("left".to_string(), Transformation::Tape(TapeOp::ShiftLeft)),
        ("right".to_string(), Transformation::Tape(TapeOp::ShiftRight)),
    ];
    for &c in alphabet.iter().chain(std::iter::once(&BLANK)) {
        ops.push((format!("write-{c}"), Transformation::Tape(TapeOp::Write(c))));
    }
    ops
}

fn check_alphabet(alphabet: &[char]) -> Result<()> {
    if alphabet.is_empty() || alphabet.contains(&BLANK) {
        return Err(Error::InvalidParameter(
            "tape alphabet must be non-empty and exclude the blank".into(),
        ));
    }
    Ok(())
}

/// `TM(A)`: the Turing tape as a computation system.
pub fn turing_tape(alphabet: &[char]) -> Result<SystemDef> {
    check_alphabet(alphabet)?;
    Ok(SystemDef {
        name: "TM".into(),
        space: Space::Tapes { alphabet: alphabet.to_vec() },
        partitions: vec![("read".into(), Measurement::TapeRead { alphabet: alphabet.to_vec() })],
        transformations: tape_ops(alphabet),
        initial: Configuration::Tape(TapeConfig::blank()),
    })
}

/// Second tape of an oracle machine, with the query transformation writing `mark`.
pub fn oracle_tape(predicate: Predicate, mark: char) -> Result<SystemDef> {
    let mut alphabet = vec!['0', '1'];
    if !alphabet.contains(&mark) {
        alphabet.push(mark);
    }
    check_alphabet(&alphabet)?;
    let mut sys = turing_tape(&alphabet)?;
    sys.name = "OracleTM".into();
    sys.transformations
        .push(("query".into(), Transformation::Oracle { predicate, mark }));
    Ok(sys)
}

/// `C_phi`: the doubling map on `[0, 1)` with the halves partition.
pub fn c_phi(phi: RealValue) -> Result<SystemDef> {
    if let Some(r) = phi.exact_value() {
        if r < int(0) || r >= int(1) {
            return Err(Error::InvalidParameter(format!("phi = {r} is outside [0, 1)")));
        }
    }
    Ok(SystemDef {
        name: "CPhi".into(),
        space: Space::Euclidean(unit_half_open()),
        partitions: vec![(
            "alpha".into(),
            Measurement::Classical(Partition::new(
                vec![
                    ("lo".into(), SetExpr::half_open(int(0), rat(1, 2))),
                    ("hi".into(), SetExpr::half_open(rat(1, 2), int(1))),
                ],
                unit_half_open(),
            )?),
        )],
        transformations: vec![("T".into(), Transformation::Piecewise(shift_map(2)?))],
        initial: Configuration::Point(vec![phi]),
    })
}

/// `C_g`: the ternary shift started at `psi_g`, the advice stream with a 2 after every symbol.
pub fn c_g(g: &PrefixAdvice) -> Result<TimedSystem> {
    let psi = encode_advice_real(g, EncodingScheme::TernaryInterleaved)?;
    Ok(TimedSystem {
        base: SystemDef {
            name: "CG".into(),
            space: Space::Euclidean(unit_half_open()),
            partitions: vec![("alpha".into(), Measurement::Classical(digit_cells(3, "t")?))],
            transformations: vec![("T".into(), Transformation::Piecewise(shift_map(3)?))],
            initial: Configuration::Point(vec![psi.into()]),
        },
        kappa: vec![(
            "alpha".into(),
            KappaSpec::InverseDistanceTo((0..4).map(|k| RealValue::ratio(k, 3)).collect()),
        )],
    })
}

/// `D_g`: halving maps and a reset on `[0, 1]`, partitioned at `phi_g = 0.g(inf)` in binary.
pub fn d_g(g: &PrefixAdvice) -> Result<TimedSystem> {
    let phi: RealValue = encode_advice_real(g, EncodingScheme::Binary)?.into();
    let unit = SetExpr::closed(int(0), int(1));
    let alpha = Partition::new(
        vec![
            ("low".into(), SetExpr::interval(Some(int(0).into()), true, Some(phi.clone()), true)),
            ("high".into(), SetExpr::interval(Some(phi.clone()), false, Some(int(1).into()), true)),
        ],
        unit.clone(),
    )?;
    Ok(TimedSystem {
        base: SystemDef {
            name: "DG".into(),
            space: Space::Euclidean(unit),
            partitions: vec![("alpha".into(), Measurement::Classical(alpha))],
            transformations: vec![
                ("T0".into(), Transformation::Classical(ClassicalMap::affine_1d(rat(1, 2), int(0)))),
                ("T1".into(), Transformation::Classical(ClassicalMap::affine_1d(rat(1, 2), rat(1, 2)))),
                ("R".into(), Transformation::Classical(ClassicalMap::affine_1d(int(0), rat(1, 2)))),
            ],
            initial: Configuration::Point(vec![rat(1, 2).into()]),
        },
        kappa: vec![("alpha".into(), KappaSpec::InverseDistanceTo(vec![phi]))],
    })
}

fn increment_and_double() -> Vec<(String, Transformation)> {
    vec![
        ("p".into(), Transformation::Classical(ClassicalMap::affine_1d(int(1), int(1)))),
        ("t".into(), Transformation::Classical(ClassicalMap::affine_1d(int(2), int(0)))),
    ]
}

/// `C_1`: the real line measured by the floor-binary class of a predicate.
pub fn c1(predicate: Predicate) -> SystemDef {
    SystemDef {
        name: "C1".into(),
        space: Space::Euclidean(SetExpr::real_line()),
        partitions: vec![("alpha".into(), Measurement::FloorBinary(predicate))],
        transformations: increment_and_double(),
        initial: Configuration::Point(vec![RealValue::zero()]),
    }
}

/// `C_2`: a sign partition and a non-classical indicator transformation.
pub fn c2(predicate: Predicate) -> Result<SystemDef> {
    let sign = Partition::new(
        vec![
            ("neg".into(), SetExpr::interval(None, false, Some(int(0).into()), false)),
            ("nonneg".into(), SetExpr::interval(Some(int(0).into()), true, None, false)),
        ],
        SetExpr::real_line(),
    )?;
    let mut transformations = increment_and_double();
    transformations.push(("T".into(), Transformation::SignIndicator(predicate)));
    Ok(SystemDef {
        name: "C2".into(),
        space: Space::Euclidean(SetExpr::real_line()),
        partitions: vec![("sign".into(), Measurement::Classical(sign))],
        transformations,
        initial: Configuration::Point(vec![RealValue::zero()]),
    })
}

/// `h_z(x, y) = (x - (x - z) / (y |x - z|), y)` on the plane, with `x = z` fixed.
pub fn hz_map(z: &Rational) -> Result<PiecewiseMap> {
    let plane = SetExpr::product(SetExpr::real_line(), SetExpr::real_line());
    let side = |sign: i64| -> Result<ClassicalMap> {
        ClassicalMap::new(vec![
            MultiPoly::new(2, vec![Term::linear(int(1), 2, 0), Term::new(int(-sign), vec![int(0), int(-1)])])?,
            MultiPoly::new(2, vec![Term::linear(int(1), 2, 1)])?,
        ])
    };
    let z_val: RealValue = z.clone().into();
    let cases = vec![
        (
            SetExpr::product(SetExpr::interval(Some(z_val.clone()), false, None, false), SetExpr::real_line()),
            side(1)?,
        ),
        (
            SetExpr::product(SetExpr::interval(None, false, Some(z_val.clone()), false), SetExpr::real_line()),
            side(-1)?,
        ),
        (
            SetExpr::product(SetExpr::closed(z.clone(), z.clone()), SetExpr::real_line()),
            ClassicalMap::identity(2),
        ),
    ];
    PiecewiseMap::new(cases, plane)
}

/// The plane with `h_z`, the shifts `f+`, `f-` and the slab `(z - 1, z + 1) x R`.
pub fn hz_demo(z: &Rational) -> Result<SystemDef> {
    let plane = SetExpr::product(SetExpr::real_line(), SetExpr::real_line());
    let near = SetExpr::interval(Some((z - int(1)).into()), false, Some((z + int(1)).into()), false);
    let slab = SetExpr::product(near.clone(), SetExpr::real_line());
    let rest = SetExpr::product(SetExpr::Complement(Box::new(near)), SetExpr::real_line());
    let shift = |dy: i64| ClassicalMap::affine(&[vec![int(1), int(0)], vec![int(0), int(1)]], &[int(0), int(dy)]);
    Ok(SystemDef {
        name: "HzDemo".into(),
        space: Space::Euclidean(plane.clone()),
        partitions: vec![(
            "ball".into(),
            Measurement::Classical(Partition::new(vec![("in".into(), slab), ("out".into(), rest)], plane)?),
        )],
        transformations: vec![
            ("h".into(), Transformation::Piecewise(hz_map(z)?)),
            ("fplus".into(), Transformation::Classical(shift(1)?)),
            ("fminus".into(), Transformation::Classical(shift(-1)?)),
        ],
        initial: Configuration::Point(vec![(z + int(2)).into(), RealValue::one()]),
    })
}
