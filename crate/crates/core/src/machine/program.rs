use std::collections::HashMap;
use std::fmt;

use super::system::{Measurement, SystemDef};
use super::tape::{TapeOp, BLANK};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PartitionRef {
    /// The tape-read partition of the device's own tape.
    Tape,
    System(String),
}

impl fmt::Display for PartitionRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionRef::Tape => write!(f, "tape"),
            PartitionRef::System(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Label(String),
    /// Matches while a measurement of the partition is still running.
    Empty,
}

impl Element {
    pub fn label(s: impl Into<String>) -> Self {
        Element::Label(s.into())
    }

    pub fn symbol(c: char) -> Self {
        Element::Label(c.to_string())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Label(l) => write!(f, "{l}"),
            Element::Empty => write!(f, "EMPTY"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Tape(TapeOp),
    /// Apply a named system transformation.
    Transform(String),
    /// Commence a measurement of a named system partition.
    Measure(String),
}

impl Action {
    pub fn kind(&self) -> &'static str {
        match self {
            Action::Tape(_) => "tape",
            Action::Transform(_) => "transform",
            Action::Measure(_) => "measure",
        }
    }

    pub fn id(&self) -> String {
        match self {
            Action::Tape(op) => op.to_string(),
            Action::Transform(n) | Action::Measure(n) => n.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub from: String,
    pub partition: PartitionRef,
    pub element: Element,
    pub to: String,
    pub action: Action,
}

impl Rule {
    pub fn new(from: &str, partition: PartitionRef, element: Element, to: &str, action: Action) -> Self {
        Rule {
            from: from.to_string(),
            partition,
            element,
            to: to.to_string(),
            action,
        }
    }

    /// A rule reading the device tape.
    pub fn on_tape(from: &str, symbol: char, to: &str, op: TapeOp) -> Self {
        Rule::new(from, PartitionRef::Tape, Element::symbol(symbol), to, Action::Tape(op))
    }
}

/// A finite deterministic rule set.
#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub name: String,
    pub states: Vec<String>,
    pub initial: String,
    pub accept: String,
    pub reject: String,
    pub alphabet: Vec<char>,
    pub rules: Vec<Rule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProgramViolation {
    DifferentPartitions { state: String },
    ConflictingOutcomes { state: String, element: String },
    UnknownState(String),
    UnknownPartition(String),
    UnknownElement { partition: String, element: String },
    UnknownTransformation(String),
    RuleFromHaltingState(String),
    EmptyOnTape { state: String },
    BadSymbol(char),
    BadStates(String),
}

impl fmt::Display for ProgramViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProgramViolation::DifferentPartitions { state } => {
                write!(f, "same state, different partitions: {state}")
            }
            ProgramViolation::ConflictingOutcomes { state, element } => {
                write!(f, "conflicting outcomes for ({state}, {element})")
            }
            ProgramViolation::UnknownState(s) => write!(f, "unknown state {s}"),
            ProgramViolation::UnknownPartition(p) => write!(f, "unknown partition {p}"),
            ProgramViolation::UnknownElement { partition, element } => {
                write!(f, "unknown element {element} of partition {partition}")
            }
            ProgramViolation::UnknownTransformation(t) => write!(f, "unknown transformation {t}"),
            ProgramViolation::RuleFromHaltingState(s) => write!(f, "rule leaves halting state {s}"),
            ProgramViolation::EmptyOnTape { state } => {
                write!(f, "EMPTY element on the tape partition in state {state}")
            }
            ProgramViolation::BadSymbol(c) => write!(f, "symbol {c:?} outside the tape alphabet"),
            ProgramViolation::BadStates(m) => write!(f, "{m}"),
        }
    }
}

/// Rules of one state: the partition it measures and its rules by element.
#[derive(Clone, Debug)]
pub(crate) struct StateRules<'a> {
    pub partition: &'a PartitionRef,
    pub by_element: HashMap<&'a Element, &'a Rule>,
}

impl Program {
    /// Uses any rule that measures or matches `EMPTY`.
    pub fn is_time_aware(&self) -> bool {
        self.rules
            .iter()
            .any(|r| matches!(r.action, Action::Measure(_)) || r.element == Element::Empty)
    }

    pub(crate) fn index(&self) -> HashMap<&str, StateRules<'_>> {
        let mut map: HashMap<&str, StateRules<'_>> = HashMap::new();
        for r in &self.rules {
            let entry = map.entry(r.from.as_str()).or_insert_with(|| StateRules {
                partition: &r.partition,
                by_element: HashMap::new(),
            });
            if entry.partition == &r.partition {
                entry.by_element.entry(&r.element).or_insert(r);
            }
        }
        map
    }
}

/// Every determinism violation and dangling reference of `program` against `system`.
pub fn validate_program(program: &Program, system: &SystemDef) -> Vec<ProgramViolation> {
    let mut out = Vec::new();
    let known = |s: &str| program.states.iter().any(|t| t == s);
    for s in [&program.initial, &program.accept, &program.reject] {
        if !known(s) {
            out.push(ProgramViolation::UnknownState(s.clone()));
        }
    }
    if program.accept == program.reject {
        out.push(ProgramViolation::BadStates("accept and reject states coincide".into()));
    }
    if program.alphabet.contains(&BLANK) {
        out.push(ProgramViolation::BadSymbol(BLANK));
    }

    let mut partition_of: HashMap<&str, &PartitionRef> = HashMap::new();
    let mut outcome_of: HashMap<(&str, &Element), (&str, &Action)> = HashMap::new();
    for r in &program.rules {
        for s in [&r.from, &r.to] {
            if !known(s) {
                let v = ProgramViolation::UnknownState(s.clone());
                if !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        if r.from == program.accept || r.from == program.reject {
            out.push(ProgramViolation::RuleFromHaltingState(r.from.clone()));
        }
        match partition_of.get(r.from.as_str()) {
            Some(p) if *p != &r.partition => {
                let v = ProgramViolation::DifferentPartitions { state: r.from.clone() };
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            Some(_) => {}
            None => {
                partition_of.insert(&r.from, &r.partition);
            }
        }
        match outcome_of.get(&(r.from.as_str(), &r.element)) {
            Some(&(to, action)) if to != r.to || action != &r.action => {
                out.push(ProgramViolation::ConflictingOutcomes {
                    state: r.from.clone(),
                    element: r.element.to_string(),
                })
            }
            Some(_) => {}
            None => {
                outcome_of.insert((&r.from, &r.element), (&r.to, &r.action));
            }
        }

        match (&r.partition, &r.element) {
            (PartitionRef::Tape, Element::Empty) => {
                out.push(ProgramViolation::EmptyOnTape { state: r.from.clone() })
            }
            (PartitionRef::Tape, Element::Label(l)) => {
                let mut cs = l.chars();
                let ok = matches!((cs.next(), cs.next()), (Some(c), None) if c == BLANK || program.alphabet.contains(&c));
                if !ok {
                    out.push(ProgramViolation::UnknownElement {
                        partition: "tape".into(),
                        element: l.clone(),
                    });
                }
            }
            (PartitionRef::System(p), element) => match system.partition(p) {
                None => out.push(ProgramViolation::UnknownPartition(p.clone())),
                Some(m) => {
                    if let Element::Label(l) = element {
                        if !measurement_has(m, l) {
                            out.push(ProgramViolation::UnknownElement {
                                partition: p.clone(),
                                element: l.clone(),
                            });
                        }
                    }
                }
            },
        }

        match &r.action {
            Action::Tape(TapeOp::Write(c)) if *c != BLANK && !program.alphabet.contains(c) => {
                out.push(ProgramViolation::BadSymbol(*c))
            }
            Action::Tape(_) => {}
            Action::Transform(t) => {
                if system.transformation(t).is_none() {
                    out.push(ProgramViolation::UnknownTransformation(t.clone()));
                }
            }
            Action::Measure(p) => {
                if system.partition(p).is_none() {
                    out.push(ProgramViolation::UnknownPartition(p.clone()));
                }
            }
        }
    }
    out
}

fn measurement_has(m: &Measurement, label: &str) -> bool {
    m.labels().iter().any(|l| l == label)
}
