use compsys::advice::{PrefixAdvice, Schedule, SymbolSource};
use compsys::gallery::{build_program, build_system, d_g, sample_runs, BuiltSystem};
use compsys::machine::{
    run, validate_program, Action, Element, Outcome, PartitionRef, Program, ProgramViolation, Rule, TapeOp,
};
use compsys::numerics::precision_cap;
use compsys::timed::{timed_run, ExtNat, KappaSpec, TimedSystem};

fn program(rules: Vec<Rule>) -> Program {
    Program {
        name: "fixture".into(),
        states: ["s", "t", "acc", "rej"].map(String::from).to_vec(),
        initial: "s".into(),
        accept: "acc".into(),
        reject: "rej".into(),
        alphabet: vec!['0', '1'],
        rules,
    }
}

fn on_alpha(from: &str, element: Element, to: &str, action: Action) -> Rule {
    Rule::new(from, PartitionRef::System("alpha".into()), element, to, action)
}

fn violation_fixtures() -> Vec<(&'static str, Program, fn(&ProgramViolation) -> bool)> {
    let measure = || Action::Measure("alpha".into());
    vec![
        (
            "two partitions in one state",
            program(vec![
                Rule::on_tape("s", '_', "t", TapeOp::Identity),
                on_alpha("s", Element::label("low"), "t", measure()),
            ]),
            |v| matches!(v, ProgramViolation::DifferentPartitions { .. }),
        ),
        (
            "conflicting outcomes",
            program(vec![
                Rule::on_tape("s", '0', "t", TapeOp::Identity),
                Rule::on_tape("s", '0', "acc", TapeOp::ShiftLeft),
            ]),
            |v| matches!(v, ProgramViolation::ConflictingOutcomes { .. }),
        ),
        (
            "rule leaving a halting state",
            program(vec![Rule::on_tape("acc", '0', "t", TapeOp::Identity)]),
            |v| matches!(v, ProgramViolation::RuleFromHaltingState(_)),
        ),
    ]
}

fn dg() -> Result<TimedSystem, String> {
    let g = PrefixAdvice::new(SymbolSource::word("10110", "01"), Schedule::Identity);
    d_g(&g).map_err(|e| e.to_string())
}

pub fn interpreter() -> super::Outcome {
    let system = dg()?;
    for (name, p, expected) in violation_fixtures() {
        let found = validate_program(&p, &system.base);
        if !found.iter().any(expected) {
            return Err(format!("fixture {name:?} not rejected: {found:?}"));
        }
    }

    let runs = sample_runs();
    let mut equal_traces = 0;
    for r in &runs {
        let p = build_program(&r.program).map_err(|e| e.to_string())?;
        let s = build_system(&r.system).map_err(|e| e.to_string())?;
        let mut issues = validate_program(&p, s.base()).iter().map(|v| v.to_string()).collect::<Vec<_>>();
        issues.extend(match &s {
            BuiltSystem::Plain(d) => d.validate(precision_cap()),
            BuiltSystem::Timed(t) => t.validate(),
        });
        if !issues.is_empty() {
            return Err(format!("gallery {} rejected: {issues:?}", p.name));
        }
        if p.is_time_aware() {
            continue;
        }
        let base = s.base().clone();
        let kappa = base
            .partitions
            .iter()
            .map(|(n, _)| (n.clone(), KappaSpec::Constant(ExtNat::from_u64(5))))
            .collect();
        let timed = TimedSystem { base, kappa };
        let a = run(&p, s.base(), &r.input, 10_000).map_err(|e| e.to_string())?;
        let b = timed_run(&p, &timed, &r.input, 10_000).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{}: timed run differs from untimed run", p.name));
        }
        equal_traces += 1;
    }

    // measure at 1/2 (duration 6), transform after one step, then ask for the output
    let interrupted = program(vec![
        Rule::new("s", PartitionRef::Tape, Element::symbol('_'), "t", Action::Measure("alpha".into())),
        on_alpha("t", Element::Empty, "u", Action::Transform("T0".into())),
        on_alpha("u", Element::Empty, "u", Action::Tape(TapeOp::Identity)),
        on_alpha("u", Element::label("low"), "acc", Action::Tape(TapeOp::Identity)),
        on_alpha("u", Element::label("high"), "acc", Action::Tape(TapeOp::Identity)),
    ]);
    let interrupted = Program { states: [&interrupted.states[..], &["u".to_string()]].concat(), ..interrupted };
    let r = timed_run(&interrupted, &system, "", 100).map_err(|e| e.to_string())?;
    if r.outcome != Outcome::Reject || r.steps != 2 {
        return Err(format!("interruption fixture ended {:?} after {} steps", r.outcome, r.steps));
    }
    if r.trace.iter().any(|e| e.completed_output.is_some()) || r.trace[1].pending_partition.is_some() {
        return Err("an output was recorded after the interrupting transformation".into());
    }
    Ok(format!(
        "3/3 violation fixtures rejected, {} gallery programs valid, {equal_traces} timed/untimed trace pairs equal, \
         interrupted measurement yields no output",
        runs.len()
    ))
}
