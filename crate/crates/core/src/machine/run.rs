use std::fmt;
use std::io::Write;

use serde::Serialize;

use super::program::{validate_program, Action, Element, PartitionRef, Program};
use super::system::{Configuration, SystemDef};
use super::tape::{encode_input, TapeConfig};
use crate::error::{Error, Result};
use crate::numerics::precision_cap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Accept,
    Reject,
    OutOfSteps,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Accept => "accept",
            Outcome::Reject => "reject",
            Outcome::OutOfSteps => "out-of-steps",
        };
        write!(f, "{s}")
    }
}

/// One rule application.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceEvent {
    pub step: u64,
    pub state: String,
    pub to: String,
    pub element: String,
    pub action_kind: String,
    pub action_id: String,
    /// Device tape after the action, 16 cells either side of the head.
    pub tape: String,
    /// Configuration after the action.
    pub point: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pending_partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub duration: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completed_output: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub outcome: Outcome,
    /// Number of rule applications.
    pub steps: u64,
    pub trace: Vec<TraceEvent>,
    pub state: String,
    pub tape: TapeConfig,
    pub config: Configuration,
}

impl RunResult {
    pub fn write_trace(&self, mut w: impl Write) -> std::io::Result<()> {
        for e in &self.trace {
            serde_json::to_writer(&mut w, e)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn trace_lines(&self) -> String {
        let mut buf = Vec::new();
        self.write_trace(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }
}

pub(crate) fn check_runnable(program: &Program, system: &SystemDef) -> Result<()> {
    let violations = validate_program(program, system);
    if violations.is_empty() {
        return Ok(());
    }
    let msgs: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
    Err(Error::NotRunnable(msgs.join("; ")))
}

pub(crate) fn halted(program: &Program, state: &str) -> Option<Outcome> {
    if state == program.accept {
        Some(Outcome::Accept)
    } else if state == program.reject {
        Some(Outcome::Reject)
    } else {
        None
    }
}

/// Runs `program` on `system` with input `w` under the untimed semantics.
pub fn run(program: &Program, system: &SystemDef, w: &str, step_limit: u64) -> Result<RunResult> {
    check_runnable(program, system)?;
    if program.is_time_aware() {
        return Err(Error::NotRunnable(format!(
            "program {} uses timed measurements",
            program.name
        )));
    }
    let budget = precision_cap();
    let index = program.index();
    let mut tape = encode_input(w, &program.alphabet)?;
    let mut config = system.initial.clone();
    let mut state = program.initial.clone();
    let mut trace = Vec::new();
    let mut steps = 0u64;

    let outcome = loop {
        if let Some(o) = halted(program, &state) {
            break o;
        }
        if steps >= step_limit {
            break Outcome::OutOfSteps;
        }
        let Some(rules) = index.get(state.as_str()) else {
            state = program.reject.clone();
            continue;
        };
        let label = match rules.partition {
            PartitionRef::Tape => tape.head().to_string(),
            PartitionRef::System(p) => {
                let m = system
                    .partition(p)
                    .ok_or_else(|| Error::UnknownReference(p.clone()))?;
                m.classify(&config, budget)?
            }
        };
        let Some(rule) = rules.by_element.get(&Element::Label(label.clone())) else {
            state = program.reject.clone();
            continue;
        };
        match &rule.action {
            Action::Tape(op) => tape.apply(*op),
            Action::Transform(t) => {
                let t = system
                    .transformation(t)
                    .ok_or_else(|| Error::UnknownReference(t.clone()))?;
                config = t.apply(&config, budget)?;
            }
            Action::Measure(_) => unreachable!("time-aware programs are rejected above"),
        }
        steps += 1;
        trace.push(TraceEvent {
            step: steps,
            state: state.clone(),
            to: rule.to.clone(),
            element: label,
            action_kind: rule.action.kind().to_string(),
            action_id: rule.action.id(),
            tape: tape.window(16),
            point: config.render(),
            pending_partition: None,
            elapsed: None,
            duration: None,
            completed_output: None,
        });
        state = rule.to.clone();
    };

    Ok(RunResult {
        outcome,
        steps,
        trace,
        state,
        tape,
        config,
    })
}
