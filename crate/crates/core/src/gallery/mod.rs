//! Ready-made systems and programs, addressable by name and `key=value` parameters.

pub mod programs;
pub mod systems;

use std::collections::BTreeMap;
use std::fmt;

pub use programs::{
    advice_then_decide, counter_bits, counter_wait, encode_and_measure, extract_binary_digits,
    extract_ternary_advice, oracle_query, timing_binary_search, Decider, FloorSystem,
};
pub use systems::{c1, c2, c_g, c_phi, d_g, hz_demo, hz_map, oracle_tape, turing_tape};

use crate::advice::{PrefixAdvice, Schedule, SymbolSource};
use crate::error::{Error, Result};
use crate::machine::{Predicate, Program, SystemDef};
use crate::numerics::{Rational, RealValue};
use crate::timed::TimedSystem;

#[derive(Clone, Debug, PartialEq)]
pub enum GallerySystemId {
    Tm { alphabet: Vec<char> },
    OracleTm { predicate: Predicate, mark: char },
    CPhi { phi: RealValue },
    Cg { advice: PrefixAdvice },
    Dg { advice: PrefixAdvice },
    C1 { predicate: Predicate },
    C2 { predicate: Predicate },
    HzDemo { z: Rational },
}

#[derive(Clone, Debug, PartialEq)]
pub enum GalleryProgramId {
    ExtractBinaryDigits { n: usize },
    ExtractTernaryAdvice { n: usize },
    TimingBinarySearch { l: usize, patience: u32 },
    AdviceThenDecide { decider: Decider, c: Rational, max_len: usize, patience: u32 },
    EncodeAndMeasure { target: FloorSystem },
    OracleQuery { mark: char },
}

#[derive(Clone, Debug, PartialEq)]
pub enum BuiltSystem {
    Plain(SystemDef),
    Timed(TimedSystem),
}

impl BuiltSystem {
    pub fn base(&self) -> &SystemDef {
        match self {
            BuiltSystem::Plain(s) => s,
            BuiltSystem::Timed(t) => &t.base,
        }
    }
}

pub fn build_system(id: &GallerySystemId) -> Result<BuiltSystem> {
    Ok(match id {
        GallerySystemId::Tm { alphabet } => BuiltSystem::Plain(turing_tape(alphabet)?),
        GallerySystemId::OracleTm { predicate, mark } => {
            BuiltSystem::Plain(oracle_tape(predicate.clone(), *mark)?)
        }
        GallerySystemId::CPhi { phi } => BuiltSystem::Plain(c_phi(phi.clone())?),
        GallerySystemId::Cg { advice } => BuiltSystem::Timed(c_g(advice)?),
        GallerySystemId::Dg { advice } => BuiltSystem::Timed(d_g(advice)?),
        GallerySystemId::C1 { predicate } => BuiltSystem::Plain(c1(predicate.clone())),
        GallerySystemId::C2 { predicate } => BuiltSystem::Plain(c2(predicate.clone())?),
        GallerySystemId::HzDemo { z } => BuiltSystem::Plain(hz_demo(z)?),
    })
}

pub fn build_program(id: &GalleryProgramId) -> Result<Program> {
    match id {
        GalleryProgramId::ExtractBinaryDigits { n } => extract_binary_digits(*n),
        GalleryProgramId::ExtractTernaryAdvice { n } => extract_ternary_advice(*n),
        GalleryProgramId::TimingBinarySearch { l, patience } => timing_binary_search(*l, *patience),
        GalleryProgramId::AdviceThenDecide { decider, c, max_len, patience } => {
            advice_then_decide(*decider, c, *max_len, *patience)
        }
        GalleryProgramId::EncodeAndMeasure { target } => Ok(encode_and_measure(*target)),
        GalleryProgramId::OracleQuery { mark } => oracle_query(*mark),
    }
}

/// One catalogue line: name, parameters and what the item is.
pub struct CatalogueEntry {
    pub name: &'static str,
    pub params: &'static str,
    pub about: &'static str,
}

pub const SYSTEMS: [CatalogueEntry; 8] = [
    CatalogueEntry { name: "tm", params: "alphabet=01", about: "the Turing tape as a computation system" },
    CatalogueEntry { name: "oracle-tm", params: "predicate=NAME mark=m", about: "second tape with an oracle query" },
    CatalogueEntry { name: "cphi", params: "phi=p/q", about: "doubling map on [0,1) with the halves partition" },
    CatalogueEntry { name: "cg", params: "advice=SRC", about: "timed ternary shift started at the interleaved advice" },
    CatalogueEntry { name: "dg", params: "advice=SRC", about: "timed halving maps around the advice point" },
    CatalogueEntry { name: "c1", params: "predicate=NAME", about: "real line measured by the floor-binary class" },
    CatalogueEntry { name: "c2", params: "predicate=NAME", about: "sign partition with a floor-binary indicator map" },
    CatalogueEntry { name: "hz", params: "z=p/q", about: "plane with the radial map h_z and vertical shifts" },
];

pub const PROGRAMS: [CatalogueEntry; 6] = [
    CatalogueEntry {
        name: "extract-binary-digits",
        params: "n=N phi=p/q",
        about: "n binary digits of phi on cphi",
    },
    CatalogueEntry {
        name: "extract-ternary-advice",
        params: "n=N advice=SRC",
        about: "n advice symbols from cg under timed semantics",
    },
    CatalogueEntry {
        name: "timing-binary-search",
        params: "L=N advice=SRC [patience=K]",
        about: "L digits of the dg boundary by timed threshold search",
    },
    CatalogueEntry {
        name: "advice-then-decide",
        params: "c=p/q max-len=N advice=SRC input=W [decider=parity] [patience=K]",
        about: "search ceil(c log2 |w|) advice digits on dg, then decide",
    },
    CatalogueEntry {
        name: "encode-and-measure",
        params: "system=c1|c2 predicate=NAME input=W",
        about: "decide w in linear time on c1 or c2",
    },
    CatalogueEntry {
        name: "oracle-query",
        params: "predicate=NAME input=W [mark=m]",
        about: "copy w to the oracle tape and query",
    },
];

/// Parsed `key=value` parameters.
#[derive(Clone, Debug, Default)]
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn parse(args: &[String]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for a in args {
            let (k, v) = a
                .split_once('=')
                .ok_or_else(|| Error::InvalidParameter(format!("expected key=value, got {a:?}")))?;
            if map.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::InvalidParameter(format!("parameter {k} given twice")));
            }
        }
        Ok(Params(map))
    }

    fn raw(&self, key: &str) -> Result<&str> {
        self.0
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidParameter(format!("missing parameter {key}")))
    }

    fn get_or<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.0.get(key).map(String::as_str).unwrap_or(default)
    }

    fn number<T: std::str::FromStr>(&self, key: &str, default: Option<&str>) -> Result<T> {
        let s = match default {
            Some(d) => self.get_or(key, d),
            None => self.raw(key)?,
        };
        s.parse()
            .map_err(|_| Error::InvalidParameter(format!("{key}={s} is not a valid number")))
    }

    fn rational(&self, key: &str) -> Result<Rational> {
        parse_rational(self.raw(key)?)
    }

    fn predicate(&self) -> Result<Predicate> {
        let s = self.raw("predicate")?;
        Predicate::from_name(s).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "unknown predicate {s}; expected one of {}",
                Predicate::BUILTIN.join(", ")
            ))
        })
    }

    fn mark(&self) -> Result<char> {
        let s = self.get_or("mark", "m");
        let mut cs = s.chars();
        match (cs.next(), cs.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(Error::InvalidParameter(format!("mark must be one symbol, got {s:?}"))),
        }
    }

    fn advice(&self) -> Result<PrefixAdvice> {
        Ok(PrefixAdvice::new(parse_source(self.raw("advice")?)?, Schedule::Identity))
    }

    pub fn input(&self) -> &str {
        self.get_or("input", "")
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: num_bigint::BigInt = n
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{s:?} is not a fraction")))?;
    let d: num_bigint::BigInt = d
        .trim()
        .parse()
        .map_err(|_| Error::InvalidParameter(format!("{s:?} is not a fraction")))?;
    if d == num_bigint::BigInt::from(0) {
        return Err(Error::InvalidParameter(format!("{s:?} has a zero denominator")));
    }
    Ok(Rational::new(n, d))
}

/// `prng:SEED`, `word:PREFIX[:CYCLE]` or `file:PATH`.
pub fn parse_source(s: &str) -> Result<SymbolSource> {
    let bad = || Error::InvalidParameter(format!("advice source {s:?}: expected prng:SEED, word:PREFIX[:CYCLE] or file:PATH"));
    let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
    match kind {
        "prng" => Ok(SymbolSource::Prng { seed: rest.parse().map_err(|_| bad())? }),
        "word" => {
            let (prefix, cycle) = rest.split_once(':').unwrap_or((rest, ""));
            Ok(SymbolSource::word(prefix, cycle))
        }
        "file" => SymbolSource::from_file(rest),
        _ => Err(bad()),
    }
}

pub fn system_from_name(name: &str, p: &Params) -> Result<GallerySystemId> {
    Ok(match name {
        "tm" => GallerySystemId::Tm { alphabet: p.get_or("alphabet", "01").chars().collect() },
        "oracle-tm" => GallerySystemId::OracleTm { predicate: p.predicate()?, mark: p.mark()? },
        "cphi" => GallerySystemId::CPhi { phi: p.rational("phi")?.into() },
        "cg" => GallerySystemId::Cg { advice: p.advice()? },
        "dg" => GallerySystemId::Dg { advice: p.advice()? },
        "c1" => GallerySystemId::C1 { predicate: p.predicate()? },
        "c2" => GallerySystemId::C2 { predicate: p.predicate()? },
        "hz" => GallerySystemId::HzDemo { z: p.rational("z")? },
        _ => return Err(Error::UnknownReference(format!("gallery system {name}"))),
    })
}

/// A program paired with the system it runs on.
#[derive(Clone, Debug, PartialEq)]
pub struct GalleryRun {
    pub program: GalleryProgramId,
    pub system: GallerySystemId,
    pub input: String,
}

impl GalleryRun {
    /// Programs with measurement actions run under the timed interpreter.
    pub fn timed(&self) -> bool {
        matches!(
            self.program,
            GalleryProgramId::ExtractTernaryAdvice { .. }
                | GalleryProgramId::TimingBinarySearch { .. }
                | GalleryProgramId::AdviceThenDecide { .. }
        )
    }
}

pub fn run_from_name(name: &str, p: &Params) -> Result<GalleryRun> {
    let input = p.input().to_string();
    let patience = || p.number("patience", Some("0"));
    let (program, system) = match name {
        "extract-binary-digits" => (
            GalleryProgramId::ExtractBinaryDigits { n: p.number("n", None)? },
            system_from_name("cphi", p)?,
        ),
        "extract-ternary-advice" => (
            GalleryProgramId::ExtractTernaryAdvice { n: p.number("n", None)? },
            system_from_name("cg", p)?,
        ),
        "timing-binary-search" => (
            GalleryProgramId::TimingBinarySearch { l: p.number("L", None)?, patience: patience()? },
            system_from_name("dg", p)?,
        ),
        "advice-then-decide" => {
            let decider = p.get_or("decider", "parity");
            (
                GalleryProgramId::AdviceThenDecide {
                    decider: Decider::from_name(decider)
                        .ok_or_else(|| Error::InvalidParameter(format!("unknown decider {decider}")))?,
                    c: p.rational("c")?,
                    max_len: p.number("max-len", None)?,
                    patience: patience()?,
                },
                system_from_name("dg", p)?,
            )
        }
        "encode-and-measure" => {
            let which = p.raw("system")?;
            let target = match which {
                "c1" => FloorSystem::C1,
                "c2" => FloorSystem::C2,
                _ => return Err(Error::InvalidParameter(format!("system={which}: expected c1 or c2"))),
            };
            (GalleryProgramId::EncodeAndMeasure { target }, system_from_name(which, p)?)
        }
        "oracle-query" => (
            GalleryProgramId::OracleQuery { mark: p.mark()? },
            system_from_name("oracle-tm", p)?,
        ),
        _ => return Err(Error::UnknownReference(format!("gallery program {name}"))),
    };
    Ok(GalleryRun { program, system, input })
}

impl fmt::Display for GallerySystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GallerySystemId::Tm { alphabet } => write!(f, "tm({})", alphabet.iter().collect::<String>()),
            GallerySystemId::OracleTm { predicate, mark } => write!(f, "oracle-tm({}, {mark})", predicate.name()),
            GallerySystemId::CPhi { phi } => write!(f, "cphi({})", phi.decimal_interval(6)),
            GallerySystemId::Cg { .. } => write!(f, "cg"),
            GallerySystemId::Dg { .. } => write!(f, "dg"),
            GallerySystemId::C1 { predicate } => write!(f, "c1({})", predicate.name()),
            GallerySystemId::C2 { predicate } => write!(f, "c2({})", predicate.name()),
            GallerySystemId::HzDemo { z } => write!(f, "hz({z})"),
        }
    }
}

/// One instance of every system and program, each program with its paired system.
pub fn sample_runs() -> Vec<GalleryRun> {
    let advice = PrefixAdvice::new(SymbolSource::word("10110", "01"), Schedule::Identity);
    let run = |program, system, input: &str| GalleryRun { program, system, input: input.into() };
    vec![
        run(
            GalleryProgramId::ExtractBinaryDigits { n: 3 },
            GallerySystemId::CPhi { phi: RealValue::ratio(5, 8) },
            "",
        ),
        run(
            GalleryProgramId::ExtractTernaryAdvice { n: 4 },
            GallerySystemId::Cg { advice: advice.clone() },
            "",
        ),
        run(
            GalleryProgramId::TimingBinarySearch { l: 4, patience: 0 },
            GallerySystemId::Dg { advice: advice.clone() },
            "",
        ),
        run(
            GalleryProgramId::AdviceThenDecide {
                decider: Decider::Parity,
                c: Rational::from_integer(1.into()),
                max_len: 8,
                patience: 0,
            },
            GallerySystemId::Dg { advice },
            "0110",
        ),
        run(
            GalleryProgramId::EncodeAndMeasure { target: FloorSystem::C1 },
            GallerySystemId::C1 { predicate: Predicate::EvenOnes },
            "0110",
        ),
        run(
            GalleryProgramId::EncodeAndMeasure { target: FloorSystem::C2 },
            GallerySystemId::C2 { predicate: Predicate::Palindrome },
            "0110",
        ),
        run(
            GalleryProgramId::OracleQuery { mark: 'm' },
            GallerySystemId::OracleTm { predicate: Predicate::Contains11, mark: 'm' },
            "0110",
        ),
    ]
}

/// Every gallery system, including those without a paired program.
pub fn sample_systems() -> Vec<GallerySystemId> {
    let mut out: Vec<GallerySystemId> = sample_runs().into_iter().map(|r| r.system).collect();
    out.push(GallerySystemId::Tm { alphabet: vec!['0', '1'] });
    out.push(GallerySystemId::HzDemo { z: Rational::from_integer(0.into()) });
    out.dedup();
    out
}
