use std::fmt::Write;

use num_traits::{One, Zero};

use super::{Model, ModelProgram};
use crate::advice::{EncodingScheme, PrefixAdvice, Schedule, SymbolSource};
use crate::classical::{ClassicalMap, MultiPoly, Partition, SetExpr, Term};
use crate::gallery::BuiltSystem;
use crate::machine::{
    Action, Configuration, Element, Measurement, PartitionRef, Predicate, Space, SystemDef, TapeOp,
    Transformation,
};
use crate::numerics::{DigitSource, LazyReal, Rational, RealValue, StreamReal};
use crate::timed::{ExtNat, KappaSpec};

const OPAQUE: &str = "opaque";

/// Words that may not appear unquoted where a name is expected.
pub(super) const RESERVED: [&str; 4] = ["tape", "measure", "EMPTY", OPAQUE];

pub(super) fn quote(s: &str) -> String {
    let mut out = String::from('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

fn name(s: &str) -> String {
    let mut chars = s.chars();
    let ident = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'));
    if ident && !RESERVED.contains(&s) {
        s.to_string()
    } else {
        quote(s)
    }
}

fn rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn digits(ds: &[u8]) -> String {
    ds.iter()
        .map(|&d| char::from_digit(u32::from(d), 36).unwrap_or('?'))
        .collect()
}

fn symbol_source(s: &SymbolSource) -> String {
    match s {
        SymbolSource::Prng { seed } => format!("prng({seed})"),
        SymbolSource::Word { prefix, cycle } => format!(
            "word({}, {})",
            quote(&prefix.iter().collect::<String>()),
            quote(&cycle.iter().collect::<String>())
        ),
        SymbolSource::File { path, .. } => format!("file({})", quote(path)),
        SymbolSource::Prefixized(_) | SymbolSource::Custom(_) => OPAQUE.into(),
    }
}

fn stream(s: &StreamReal) -> String {
    match s.source() {
        DigitSource::Digits { prefix, cycle } => {
            let mut d = digits(prefix);
            if !cycle.is_empty() {
                d = format!("{d}({})", digits(cycle));
            }
            format!("stream base={} {}", s.base(), quote(&d))
        }
        DigitSource::Encoded { symbols, scheme } => {
            let scheme = match scheme {
                EncodingScheme::Binary => "binary",
                EncodingScheme::TernaryInterleaved => "ternary",
            };
            format!("encode({scheme}, {})", symbol_source(symbols))
        }
        DigitSource::Custom(_) => OPAQUE.into(),
    }
}

pub(super) fn real(x: &RealValue) -> String {
    match x {
        RealValue::Exact(r) => rational(r),
        RealValue::Stream(s) => stream(s),
        RealValue::Lazy(l) => match l.as_ref() {
            LazyReal::Affine { scale, offset, inner } => {
                format!("affine({}, {}, {})", rational(scale), rational(offset), real(inner))
            }
            LazyReal::Sum(a, b) => format!("sum({}, {})", real(a), real(b)),
            LazyReal::Product(a, b) => format!("prod({}, {})", real(a), real(b)),
            LazyReal::Root { radicand, index } => format!("root({}, {index})", real(radicand)),
            LazyReal::Recip(a) => format!("recip({})", real(a)),
            LazyReal::Abs(a) => format!("abs({})", real(a)),
            LazyReal::Min(a, b) => format!("min({}, {})", real(a), real(b)),
            LazyReal::Max(a, b) => format!("max({}, {})", real(a), real(b)),
        },
    }
}

fn term(t: &Term) -> String {
    let mut out = real(&t.coef);
    for (i, q) in t.exps.iter().enumerate() {
        if q.is_zero() {
            continue;
        }
        write!(out, "*x{}", i + 1).unwrap();
        if q.is_integer() && *q > Rational::one() {
            write!(out, "^{}", q.numer()).unwrap();
        } else if !q.is_one() {
            write!(out, "^({})", rational(q)).unwrap();
        }
    }
    out
}

fn poly(p: &MultiPoly) -> String {
    if p.terms.is_empty() {
        return "zero".into();
    }
    p.terms.iter().map(term).collect::<Vec<_>>().join(" + ")
}

fn map(m: &ClassicalMap) -> String {
    let comps: Vec<String> = m.components.iter().map(poly).collect();
    let mut out = format!("map[{}]", comps.join(", "));
    if m.algebraic && !m.components.iter().all(MultiPoly::coefficients_exact) {
        out.push_str(" algebraic");
    }
    out
}

fn bound(b: &Option<RealValue>, inf: &str) -> String {
    b.as_ref().map_or_else(|| inf.to_string(), real)
}

fn closure(closed: bool) -> &'static str {
    if closed {
        "closed"
    } else {
        "open"
    }
}

pub(super) fn set(s: &SetExpr) -> String {
    match s {
        SetExpr::Ball { center, radius, closed } => {
            let c: Vec<String> = center.iter().map(real).collect();
            format!("ball(({}), {}, {})", c.join(", "), real(radius), closure(*closed))
        }
        SetExpr::Interval { lo, lo_closed, hi, hi_closed } => format!(
            "interval({}, {}, {}, {})",
            bound(lo, "-inf"),
            bound(hi, "inf"),
            closure(*lo_closed),
            closure(*hi_closed)
        ),
        SetExpr::Product(a, b) => format!("product({}, {})", set(a), set(b)),
        SetExpr::Union(a, b) => format!("union({}, {})", set(a), set(b)),
        SetExpr::Intersection(a, b) => format!("inter({}, {})", set(a), set(b)),
        SetExpr::Complement(a) => format!("compl({})", set(a)),
        SetExpr::Preimage { map: m, inverse, inner } => {
            format!("preimage({}, {}, {})", map(m), map(inverse), set(inner))
        }
    }
}

fn alphabet(a: &[char]) -> String {
    quote(&a.iter().collect::<String>())
}

fn predicate(p: &Predicate) -> String {
    name(p.name())
}

fn partition(p: &Partition) -> String {
    if p.distance.is_some() {
        return OPAQUE.into();
    }
    let cells: Vec<String> = p
        .elements
        .iter()
        .map(|(l, s)| format!("{} = {}", quote(l), set(s)))
        .collect();
    format!("cells({}, {})", set(&p.domain), cells.join(", "))
}

fn measurement(m: &Measurement) -> String {
    match m {
        Measurement::Classical(p) => partition(p),
        Measurement::TapeRead { alphabet: a } => format!("tape-read({})", alphabet(a)),
        Measurement::FloorBinary(p) => format!("floor-binary({})", predicate(p)),
    }
}

fn tape_op(op: &TapeOp) -> String {
    match op {
        TapeOp::Identity => "id".into(),
        TapeOp::ShiftLeft => "left".into(),
        TapeOp::ShiftRight => "right".into(),
        TapeOp::Write(c) => format!("write {}", quote(&c.to_string())),
    }
}

fn transformation(t: &Transformation) -> String {
    match t {
        Transformation::Classical(m) => map(m),
        Transformation::Piecewise(p) => {
            let cases: Vec<String> = p
                .cases
                .iter()
                .map(|(s, m)| format!("{} -> {}", set(s), map(m)))
                .collect();
            format!("piecewise({}, {})", set(&p.domain), cases.join(", "))
        }
        Transformation::Tape(op) => format!("tape({})", tape_op(op)),
        Transformation::Oracle { predicate: p, mark } => {
            format!("oracle({}, {})", predicate(p), quote(&mark.to_string()))
        }
        Transformation::SignIndicator(p) => format!("sign-indicator({})", predicate(p)),
    }
}

fn kappa(k: &KappaSpec) -> String {
    match k {
        KappaSpec::InversePolynomial(c) => {
            let c: Vec<String> = c.iter().map(u64::to_string).collect();
            format!("inverse-polynomial({})", c.join(", "))
        }
        KappaSpec::InverseDistanceTo(p) => {
            let p: Vec<String> = p.iter().map(real).collect();
            format!("inverse-distance({})", p.join(", "))
        }
        KappaSpec::Constant(ExtNat::Infinite) => "constant(inf)".into(),
        KappaSpec::Constant(ExtNat::Finite(n)) => format!("constant({n})"),
        KappaSpec::Explicit(_) => OPAQUE.into(),
    }
}

fn system_body(out: &mut String, s: &SystemDef) {
    match &s.space {
        Space::Euclidean(x) => writeln!(out, "  space {}", set(x)),
        Space::Tapes { alphabet: a } => writeln!(out, "  space tapes({})", alphabet(a)),
    }
    .unwrap();
    for (n, m) in &s.partitions {
        writeln!(out, "  partition {} = {}", name(n), measurement(m)).unwrap();
    }
    for (n, t) in &s.transformations {
        writeln!(out, "  transform {} = {}", name(n), transformation(t)).unwrap();
    }
    match &s.initial {
        Configuration::Point(p) => {
            let p: Vec<String> = p.iter().map(real).collect();
            writeln!(out, "  initial point({})", p.join(", "))
        }
        Configuration::Tape(t) => writeln!(
            out,
            "  initial tape({}, {}, {})",
            quote(&t.left_cells()),
            quote(&t.head().to_string()),
            quote(&t.right_cells())
        ),
    }
    .unwrap();
}

pub fn render_system(s: &BuiltSystem) -> String {
    let mut out = String::new();
    match s {
        BuiltSystem::Plain(d) => {
            writeln!(out, "system {} {{", name(&d.name)).unwrap();
            system_body(&mut out, d);
        }
        BuiltSystem::Timed(t) => {
            writeln!(out, "timed-system {} {{", name(&t.base.name)).unwrap();
            system_body(&mut out, &t.base);
            for (n, k) in &t.kappa {
                writeln!(out, "  kappa {} = {}", name(n), kappa(k)).unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn render_program(p: &ModelProgram) -> String {
    let prog = &p.program;
    let mut out = format!("program {} {{\n", name(&prog.name));
    if let Some(s) = &p.system {
        writeln!(out, "  system {}", name(s)).unwrap();
    }
    writeln!(out, "  alphabet {}", alphabet(&prog.alphabet)).unwrap();
    let states: Vec<String> = prog.states.iter().map(|s| name(s)).collect();
    writeln!(out, "  states {}", states.join(", ")).unwrap();
    writeln!(out, "  initial {}", name(&prog.initial)).unwrap();
    writeln!(out, "  accept {}", name(&prog.accept)).unwrap();
    writeln!(out, "  reject {}", name(&prog.reject)).unwrap();
    for r in &prog.rules {
        let part = match &r.partition {
            PartitionRef::Tape => "tape".to_string(),
            PartitionRef::System(n) => name(n),
        };
        let elem = match &r.element {
            Element::Label(l) => quote(l),
            Element::Empty => "EMPTY".into(),
        };
        let action = match &r.action {
            Action::Tape(op) => format!("tape({})", tape_op(op)),
            Action::Transform(t) => name(t),
            Action::Measure(m) => format!("measure({})", name(m)),
        };
        writeln!(out, "  rule ({}, {part}, {elem}, {}, {action})", name(&r.from), name(&r.to)).unwrap();
    }
    out.push_str("}\n");
    out
}

fn advice(n: &str, g: &PrefixAdvice) -> String {
    let schedule = match &g.schedule {
        Schedule::Identity => "identity".to_string(),
        Schedule::Log(c) => format!("log({})", rational(c)),
        Schedule::Prefixized(_) => OPAQUE.into(),
    };
    format!("advice {} = {} schedule {schedule}\n", name(n), symbol_source(&g.source))
}

/// Canonical text of a model; parsing it back yields an equal model.
pub fn render(model: &Model) -> String {
    let mut blocks: Vec<String> = model.advice.iter().map(|(n, g)| advice(n, g)).collect();
    blocks.extend(model.systems.iter().map(render_system));
    blocks.extend(model.programs.iter().map(render_program));
    blocks.join("\n")
}
