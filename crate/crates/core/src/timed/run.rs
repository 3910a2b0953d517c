use super::kappa::KappaTracker;
use super::TimedSystem;
use crate::error::{Error, Result};
use crate::machine::run::{check_runnable, halted};
use crate::machine::{encode_input, Action, Element, Outcome, PartitionRef, Program, RunResult, TraceEvent};
use crate::numerics::precision_cap;

/// A measurement in progress or completed and not yet forgotten.
struct Pending {
    partition: String,
    /// Step number of the rule application that commenced it.
    commenced_at: u64,
    kappa: KappaTracker,
    output: Option<String>,
}

impl Pending {
    /// Steps spent on the measurement once step `step` has been applied.
    fn elapsed(&self, step: u64) -> u64 {
        step - self.commenced_at + 1
    }
}

/// Runs a program under the time-aware semantics.
///
/// A measurement commenced at step `c` with duration `k` yields its output to
/// the rule applied at step `c + k`; until then only `EMPTY` rules over that
/// partition apply. Applying a transformation or commencing another
/// measurement abandons it and forgets its output. Programs without
/// measurement actions or `EMPTY` rules measure instantly, as in the untimed
/// interpreter.
pub fn timed_run(program: &Program, system: &TimedSystem, w: &str, step_limit: u64) -> Result<RunResult> {
    let base = &system.base;
    check_runnable(program, base)?;
    let time_aware = program.is_time_aware();
    let budget = precision_cap();
    let index = program.index();
    let mut tape = encode_input(w, &program.alphabet)?;
    let mut config = base.initial.clone();
    let mut state = program.initial.clone();
    let mut trace = Vec::new();
    let mut steps = 0u64;
    let mut pending: Option<Pending> = None;

    let outcome = loop {
        if let Some(o) = halted(program, &state) {
            break o;
        }
        if steps >= step_limit {
            break Outcome::OutOfSteps;
        }
        let step = steps + 1;
        let Some(rules) = index.get(state.as_str()) else {
            state = program.reject.clone();
            continue;
        };
        let element = match rules.partition {
            PartitionRef::Tape => Element::symbol(tape.head()),
            PartitionRef::System(p) if !time_aware => {
                let m = base.partition(p).ok_or_else(|| Error::UnknownReference(p.clone()))?;
                Element::Label(m.classify(&config, budget)?)
            }
            PartitionRef::System(p) => match pending.as_mut() {
                Some(m) if &m.partition == p => {
                    if m.output.is_none() && m.kappa.at_most(step - m.commenced_at)? {
                        let meas = base.partition(p).ok_or_else(|| Error::UnknownReference(p.clone()))?;
                        m.output = Some(meas.classify(&config, budget)?);
                    }
                    match &m.output {
                        Some(label) => Element::Label(label.clone()),
                        None => Element::Empty,
                    }
                }
                _ => {
                    state = program.reject.clone();
                    continue;
                }
            },
        };
        let Some(rule) = rules.by_element.get(&element) else {
            state = program.reject.clone();
            continue;
        };
        match &rule.action {
            Action::Tape(op) => tape.apply(*op),
            Action::Transform(t) => {
                let t = base
                    .transformation(t)
                    .ok_or_else(|| Error::UnknownReference(t.clone()))?;
                config = t.apply(&config, budget)?;
                pending = None;
            }
            Action::Measure(p) => {
                let meas = base.partition(p).ok_or_else(|| Error::UnknownReference(p.clone()))?;
                let spec = system
                    .kappa(p)
                    .ok_or_else(|| Error::UnknownReference(format!("measurement time of {p}")))?;
                let mut kappa = KappaTracker::new(spec, meas, &config)?;
                kappa.settle(64);
                pending = Some(Pending {
                    partition: p.clone(),
                    commenced_at: step,
                    kappa,
                    output: None,
                });
            }
        }
        steps = step;
        trace.push(TraceEvent {
            step,
            state: state.clone(),
            to: rule.to.clone(),
            element: element.to_string(),
            action_kind: rule.action.kind().to_string(),
            action_id: rule.action.id(),
            tape: tape.window(16),
            point: config.render(),
            pending_partition: pending.as_ref().map(|m| m.partition.clone()),
            elapsed: pending.as_ref().map(|m| m.elapsed(step)),
            duration: pending.as_ref().map(|m| m.kappa.describe()),
            completed_output: pending.as_ref().and_then(|m| m.output.clone()),
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
