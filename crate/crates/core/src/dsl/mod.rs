//! Text format for advice, systems, timed systems and programs.
//!
//! ```text
//! advice g = word("10110", "01") schedule identity
//!
//! system CPhi {
//!   space interval(0, 1, closed, open)
//!   partition alpha = cells(interval(0, 1, closed, open),
//!     "lo" = interval(0, 5/8, closed, open), "hi" = interval(5/8, 1, closed, open))
//!   transform T = piecewise(interval(0, 1, closed, open),
//!     interval(0, 1/2, closed, open) -> map[2*x1],
//!     interval(1/2, 1, closed, open) -> map[2*x1 + -1])
//!   initial point(1/4)
//! }
//!
//! program bits {
//!   system CPhi
//!   alphabet "01"
//!   states s, done, no
//!   initial s
//!   accept done
//!   reject no
//!   rule (s, alpha, "lo", done, T)
//! }
//! ```
//!
//! Timed systems use `timed-system` and add one `kappa PARTITION = ...` line per
//! partition. Values that have no textual form (closures) render as `opaque`,
//! which does not parse back.

pub mod lexer;
mod parser;
mod render;

use std::fmt;

use crate::advice::PrefixAdvice;
use crate::gallery::BuiltSystem;
use crate::machine::{validate_program, Program, SystemDef};
use crate::numerics::precision_cap;

pub use parser::parse;
pub use render::{render, render_program, render_system};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl Diagnostic {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        Diagnostic {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// A program together with the name of the system it is written for.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelProgram {
    pub program: Program,
    pub system: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Model {
    pub advice: Vec<(String, PrefixAdvice)>,
    pub systems: Vec<BuiltSystem>,
    pub programs: Vec<ModelProgram>,
}

#[derive(Debug)]
pub struct Parsed {
    pub model: Model,
    pub diagnostics: Vec<Diagnostic>,
}

/// Parses and returns the model only when there are no diagnostics.
pub fn parse_model(text: &str) -> Result<Model, Vec<Diagnostic>> {
    let parsed = parse(text);
    if parsed.diagnostics.is_empty() {
        Ok(parsed.model)
    } else {
        Err(parsed.diagnostics)
    }
}

impl Model {
    pub fn system(&self, name: &str) -> Option<&BuiltSystem> {
        self.systems.iter().find(|s| s.base().name == name)
    }

    pub fn program(&self, name: &str) -> Option<&ModelProgram> {
        self.programs.iter().find(|p| p.program.name == name)
    }

    /// Semantic checks of every item; each message names the item it concerns.
    pub fn validate(&self) -> Vec<String> {
        let mut issues = Vec::new();
        let names: Vec<&str> = self.systems.iter().map(|s| s.base().name.as_str()).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                issues.push(format!("duplicate system {n}"));
            }
        }
        for (i, p) in self.programs.iter().enumerate() {
            if self.programs[..i].iter().any(|q| q.program.name == p.program.name) {
                issues.push(format!("duplicate program {}", p.program.name));
            }
        }
        for s in &self.systems {
            let found = match s {
                BuiltSystem::Plain(d) => d.validate(precision_cap()),
                BuiltSystem::Timed(t) => t.validate(),
            };
            let name = &s.base().name;
            issues.extend(found.into_iter().map(|m| format!("system {name}: {m}")));
        }
        for p in &self.programs {
            let name = &p.program.name;
            let system: Option<&SystemDef> = match &p.system {
                Some(s) => match self.system(s) {
                    Some(b) => Some(b.base()),
                    None => {
                        issues.push(format!("program {name}: unknown system {s}"));
                        None
                    }
                },
                None => None,
            };
            let empty = SystemDef {
                name: String::new(),
                space: crate::machine::Space::Tapes { alphabet: Vec::new() },
                partitions: Vec::new(),
                transformations: Vec::new(),
                initial: crate::machine::Configuration::Tape(crate::machine::TapeConfig::blank()),
            };
            let found = validate_program(&p.program, system.unwrap_or(&empty));
            issues.extend(found.into_iter().map(|v| format!("program {name}: {v}")));
        }
        issues
    }
}

#[cfg(test)]
mod tests;
