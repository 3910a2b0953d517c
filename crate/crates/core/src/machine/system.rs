use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::tape::{TapeConfig, TapeOp, BLANK};
use crate::classical::{ClassicalMap, Partition, PiecewiseMap, Point, SetExpr};
use crate::error::{Error, Result};
use crate::numerics::real::depth_schedule;
use crate::numerics::RealValue;

/// A named membership predicate over words.
#[derive(Clone)]
pub enum Predicate {
    /// Even number of '1's.
    EvenOnes,
    Palindrome,
    /// Contains "11" as a factor.
    Contains11,
    All,
    Nothing,
    Custom {
        name: String,
        f: Arc<dyn Fn(&str) -> bool + Send + Sync>,
    },
}

impl Predicate {
    pub const BUILTIN: [&'static str; 5] = ["even-ones", "palindrome", "contains-11", "all", "none"];

    pub fn custom(name: &str, f: impl Fn(&str) -> bool + Send + Sync + 'static) -> Self {
        Predicate::Custom {
            name: name.to_string(),
            f: Arc::new(f),
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "even-ones" => Predicate::EvenOnes,
            "palindrome" => Predicate::Palindrome,
            "contains-11" => Predicate::Contains11,
            "all" => Predicate::All,
            "none" => Predicate::Nothing,
            _ => return None,
        })
    }

    pub fn name(&self) -> &str {
        match self {
            Predicate::EvenOnes => "even-ones",
            Predicate::Palindrome => "palindrome",
            Predicate::Contains11 => "contains-11",
            Predicate::All => "all",
            Predicate::Nothing => "none",
            Predicate::Custom { name, .. } => name,
        }
    }

    pub fn eval(&self, w: &str) -> bool {
        match self {
            Predicate::EvenOnes => w.chars().filter(|&c| c == '1').count() % 2 == 0,
            Predicate::Palindrome => w.chars().eq(w.chars().rev()),
            Predicate::Contains11 => w.contains("11"),
            Predicate::All => true,
            Predicate::Nothing => false,
            Predicate::Custom { f, .. } => f(w),
        }
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Predicate({})", self.name())
    }
}

impl PartialEq for Predicate {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Predicate::Custom { f: a, .. }, Predicate::Custom { f: b, .. }) => Arc::ptr_eq(a, b),
            _ => self.name() == other.name(),
        }
    }
}

/// A point of the configuration space.
#[derive(Clone, Debug, PartialEq)]
pub enum Configuration {
    Point(Point),
    Tape(TapeConfig),
}

impl Configuration {
    pub fn point(&self) -> Option<&Point> {
        match self {
            Configuration::Point(p) => Some(p),
            Configuration::Tape(_) => None,
        }
    }

    pub fn tape(&self) -> Option<&TapeConfig> {
        match self {
            Configuration::Tape(t) => Some(t),
            Configuration::Point(_) => None,
        }
    }

    /// Coordinates as decimal enclosures to 12 places, or the tape window.
    pub fn render(&self) -> String {
        match self {
            Configuration::Point(p) => {
                let parts: Vec<String> = p.iter().map(|v| v.decimal_interval(12)).collect();
                parts.join(";")
            }
            Configuration::Tape(t) => t.window(16),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Space {
    Euclidean(SetExpr),
    Tapes { alphabet: Vec<char> },
}

/// Binary digits of `floor(x)`, or `None` when `floor(x) < 1`.
fn floor_binary(x: &RealValue, budget: u32) -> Result<Option<String>> {
    let floor = match x.exact_value() {
        Some(r) => r.floor().to_integer(),
        None => {
            let mut found = None;
            for depth in depth_schedule(budget) {
                if let Some(e) = x.enclose(depth) {
                    let (lo, hi) = (e.lo().floor(), e.hi().floor());
                    // hi exactly on an integer may still be the value itself
                    if lo == hi && e.hi() != &hi {
                        found = Some(lo.to_integer());
                        break;
                    }
                }
            }
            found.ok_or_else(|| Error::exhausted(budget, "integer part"))?
        }
    };
    if floor < BigInt::one() || floor.is_negative() {
        return Ok(None);
    }
    Ok(Some(floor.to_str_radix(2)))
}

/// Whether `floor(x)` has binary representation `1w` with `w` in the predicate.
fn floor_class(pred: &Predicate, x: &RealValue, budget: u32) -> Result<bool> {
    Ok(match floor_binary(x, budget)? {
        Some(bits) => pred.eval(&bits[1..]),
        None => false,
    })
}

/// A measurement: a finite partition of the configuration space.
#[derive(Clone, Debug, PartialEq)]
pub enum Measurement {
    Classical(Partition),
    /// Reads the symbol under the head of a tape-valued space.
    TapeRead { alphabet: Vec<char> },
    /// `{in, out}` by whether `floor(x)` is `1w` for a word `w` in the predicate.
    FloorBinary(Predicate),
}

impl Measurement {
    pub fn is_classical(&self) -> bool {
        matches!(self, Measurement::Classical(_))
    }

    pub fn labels(&self) -> Vec<String> {
        match self {
            Measurement::Classical(p) => p.labels().map(str::to_string).collect(),
            Measurement::TapeRead { alphabet } => alphabet
                .iter()
                .chain(std::iter::once(&BLANK))
                .map(|c| c.to_string())
                .collect(),
            Measurement::FloorBinary(_) => vec!["in".into(), "out".into()],
        }
    }

    pub fn classify(&self, config: &Configuration, budget: u32) -> Result<String> {
        match (self, config) {
            (Measurement::Classical(p), Configuration::Point(x)) => {
                p.classify(x, budget).map(str::to_string)
            }
            (Measurement::TapeRead { .. }, Configuration::Tape(t)) => Ok(t.head().to_string()),
            (Measurement::FloorBinary(pred), Configuration::Point(x)) if x.len() == 1 => {
                Ok(if floor_class(pred, &x[0], budget)? { "in" } else { "out" }.to_string())
            }
            _ => Err(Error::InvalidConstruction(
                "measurement does not match the configuration space".into(),
            )),
        }
    }
}

/// A transformation of the configuration space.
#[derive(Clone, Debug, PartialEq)]
pub enum Transformation {
    Classical(ClassicalMap),
    Piecewise(PiecewiseMap),
    Tape(TapeOp),
    /// Writes `mark` under the head when the word right of the head satisfies the predicate.
    Oracle { predicate: Predicate, mark: char },
    /// `x -> 1` when `floor(x)` is `1w` with `w` in the predicate, `-1` otherwise.
    SignIndicator(Predicate),
}

impl Transformation {
    /// Classically constructable: classical or piecewise classical.
    pub fn is_classical(&self) -> bool {
        matches!(self, Transformation::Classical(_) | Transformation::Piecewise(_))
    }

    pub fn apply(&self, config: &Configuration, budget: u32) -> Result<Configuration> {
        match (self, config) {
            (Transformation::Classical(m), Configuration::Point(x)) => {
                Ok(Configuration::Point(m.apply(x)?))
            }
            (Transformation::Piecewise(m), Configuration::Point(x)) => {
                Ok(Configuration::Point(m.apply(x, budget)?))
            }
            (Transformation::Tape(op), Configuration::Tape(t)) => {
                Ok(Configuration::Tape(t.applied(*op)))
            }
            (Transformation::Oracle { predicate, mark }, Configuration::Tape(t)) => {
                let mut t = t.clone();
                if predicate.eval(&t.word_right_of_head()) {
                    t.apply(TapeOp::Write(*mark));
                }
                Ok(Configuration::Tape(t))
            }
            (Transformation::SignIndicator(pred), Configuration::Point(x)) if x.len() == 1 => {
                let v = if floor_class(pred, &x[0], budget)? { 1 } else { -1 };
                Ok(Configuration::Point(vec![RealValue::from_i64(v)]))
            }
            _ => Err(Error::InvalidConstruction(
                "transformation does not match the configuration space".into(),
            )),
        }
    }
}

/// A computation system `(X, partitions, transformations, x0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemDef {
    pub name: String,
    pub space: Space,
    pub partitions: Vec<(String, Measurement)>,
    pub transformations: Vec<(String, Transformation)>,
    pub initial: Configuration,
}

impl SystemDef {
    pub fn partition(&self, name: &str) -> Option<&Measurement> {
        self.partitions.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }

    pub fn transformation(&self, name: &str) -> Option<&Transformation> {
        self.transformations.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    /// Every partition and transformation is classical.
    pub fn is_classical(&self) -> bool {
        self.partitions.iter().all(|(_, m)| m.is_classical())
            && self.transformations.iter().all(|(_, t)| t.is_classical())
    }

    /// Structural checks: names are unique, items fit the space and `x0` lies in `X`.
    pub fn validate(&self, budget: u32) -> Vec<String> {
        let mut issues = Vec::new();
        let mut names: Vec<&str> = self.partitions.iter().map(|(n, _)| n.as_str()).collect();
        names.extend(self.transformations.iter().map(|(n, _)| n.as_str()));
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                issues.push(format!("duplicate name {n}"));
            }
        }
        match (&self.space, &self.initial) {
            (Space::Euclidean(x), Configuration::Point(p)) => {
                let m = x.dim();
                match x.contains(p, budget) {
                    Ok(true) => {}
                    Ok(false) => issues.push("initial point lies outside X".into()),
                    Err(e) => issues.push(format!("initial point membership: {e}")),
                }
                for (n, meas) in &self.partitions {
                    match meas {
                        Measurement::Classical(p) if p.dim() != m => {
                            issues.push(format!("partition {n} has dimension {}", p.dim()))
                        }
                        Measurement::TapeRead { .. } => {
                            issues.push(format!("partition {n} reads a tape but X is Euclidean"))
                        }
                        Measurement::FloorBinary(_) if m != 1 => {
                            issues.push(format!("partition {n} needs a one-dimensional X"))
                        }
                        _ => {}
                    }
                }
                for (n, t) in &self.transformations {
                    let ok = match t {
                        Transformation::Classical(c) => c.arity() == m,
                        Transformation::Piecewise(p) => p.dim() == m,
                        Transformation::SignIndicator(_) => m == 1,
                        _ => false,
                    };
                    if !ok {
                        issues.push(format!("transformation {n} does not act on X"));
                    }
                }
            }
            (Space::Tapes { alphabet }, Configuration::Tape(t)) => {
                if alphabet.contains(&BLANK) {
                    issues.push("tape alphabet contains the blank".into());
                }
                if t.contents().chars().any(|c| c != BLANK && !alphabet.contains(&c)) {
                    issues.push("initial tape uses symbols outside the alphabet".into());
                }
                for (n, meas) in &self.partitions {
                    if !matches!(meas, Measurement::TapeRead { .. }) {
                        issues.push(format!("partition {n} does not act on tapes"));
                    }
                }
                for (n, t) in &self.transformations {
                    let ok = match t {
                        Transformation::Tape(TapeOp::Write(c)) => *c == BLANK || alphabet.contains(c),
                        Transformation::Tape(_) => true,
                        Transformation::Oracle { mark, .. } => alphabet.contains(mark),
                        _ => false,
                    };
                    if !ok {
                        issues.push(format!("transformation {n} does not act on X"));
                    }
                }
            }
            _ => issues.push("initial configuration does not match the space".into()),
        }
        issues
    }
}
