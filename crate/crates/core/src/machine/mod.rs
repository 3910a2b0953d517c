//! Turing tapes, rule-based programs and the untimed device interpreter.

pub mod program;
pub mod run;
pub mod system;
pub mod tape;

pub use program::{validate_program, Action, Element, PartitionRef, Program, ProgramViolation, Rule};
pub use run::{run, Outcome, RunResult, TraceEvent};
pub use system::{Configuration, Measurement, Predicate, Space, SystemDef, Transformation};
pub use tape::{encode_input, TapeConfig, TapeOp, BLANK};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{ClassicalMap, Partition, SetExpr};
    use crate::numerics::{int, rat};

    fn line_system() -> SystemDef {
        let alpha = Partition::new(
            vec![
                ("neg".into(), SetExpr::interval(None, false, Some(int(0).into()), false)),
                ("pos".into(), SetExpr::interval(Some(int(0).into()), true, None, false)),
            ],
            SetExpr::real_line(),
        )
        .unwrap();
        SystemDef {
            name: "line".into(),
            space: Space::Euclidean(SetExpr::real_line()),
            partitions: vec![("alpha".into(), Measurement::Classical(alpha))],
            transformations: vec![
                ("inc".into(), Transformation::Classical(ClassicalMap::affine_1d(int(1), int(1)))),
                ("dec".into(), Transformation::Classical(ClassicalMap::affine_1d(int(1), int(-1)))),
            ],
            initial: Configuration::Point(vec![rat(-5, 2).into()]),
        }
    }

    fn program(rules: Vec<Rule>) -> Program {
        Program {
            name: "p".into(),
            states: ["s0", "s1", "s2", "sa", "sr"].map(String::from).to_vec(),
            initial: "s0".into(),
            accept: "sa".into(),
            reject: "sr".into(),
            alphabet: vec!['0', '1'],
            rules,
        }
    }

    fn sys(from: &str, el: &str, to: &str, t: &str) -> Rule {
        Rule::new(
            from,
            PartitionRef::System("alpha".into()),
            Element::label(el),
            to,
            Action::Transform(t.into()),
        )
    }

    #[test]
    fn single_rule_accepts() {
        let p = program(vec![sys("s0", "neg", "sa", "inc")]);
        let r = run(&p, &line_system(), "", 10).unwrap();
        assert_eq!((r.outcome, r.steps), (Outcome::Accept, 1));
        assert_eq!(r.config, Configuration::Point(vec![rat(-3, 2).into()]));
    }

    #[test]
    fn missing_rule_rejects_without_a_step() {
        let p = program(vec![sys("s1", "neg", "sa", "inc")]);
        let r = run(&p, &line_system(), "", 10).unwrap();
        assert_eq!((r.outcome, r.steps), (Outcome::Reject, 0));
    }

    #[test]
    fn counting_up_to_the_boundary() {
        let p = program(vec![sys("s0", "neg", "s0", "inc"), sys("s0", "pos", "sa", "dec")]);
        let r = run(&p, &line_system(), "", 100).unwrap();
        assert_eq!((r.outcome, r.steps), (Outcome::Accept, 4));
        let short = run(&p, &line_system(), "", 2).unwrap();
        assert_eq!((short.outcome, short.steps), (Outcome::OutOfSteps, 2));
        // Each event touches either the tape or the point.
        assert!(r.trace.iter().all(|e| e.action_kind == "transform"));
        assert_eq!(r.trace[0].point, "[-1.500000000000,-1.500000000000]");
    }

    #[test]
    fn determinism_violations() {
        let s = line_system();
        assert!(validate_program(&program(vec![sys("s0", "neg", "s1", "inc")]), &s).is_empty());

        let mixed = program(vec![
            sys("s0", "neg", "s1", "inc"),
            Rule::on_tape("s0", '1', "s1", TapeOp::ShiftLeft),
        ]);
        assert_eq!(
            validate_program(&mixed, &s),
            vec![ProgramViolation::DifferentPartitions { state: "s0".into() }]
        );

        let conflict = program(vec![sys("s0", "neg", "s1", "inc"), sys("s0", "neg", "s2", "inc")]);
        assert_eq!(
            validate_program(&conflict, &s),
            vec![ProgramViolation::ConflictingOutcomes {
                state: "s0".into(),
                element: "neg".into()
            }]
        );

        let dangling = program(vec![
            sys("sa", "zero", "s9", "halve"),
            Rule::new("s1", PartitionRef::System("beta".into()), Element::label("x"), "s2", Action::Tape(TapeOp::Identity)),
        ]);
        let v = validate_program(&dangling, &s);
        assert!(v.contains(&ProgramViolation::UnknownState("s9".into())));
        assert!(v.contains(&ProgramViolation::RuleFromHaltingState("sa".into())));
        assert!(v.contains(&ProgramViolation::UnknownTransformation("halve".into())));
        assert!(v.contains(&ProgramViolation::UnknownPartition("beta".into())));
        assert!(v.contains(&ProgramViolation::UnknownElement {
            partition: "alpha".into(),
            element: "zero".into()
        }));
        assert!(run(&dangling, &s, "", 5).is_err());
    }

    #[test]
    fn tape_programs_and_trace_export() {
        // Accept words ending in 1.
        let p = program(vec![
            Rule::on_tape("s0", '0', "s0", TapeOp::ShiftLeft),
            Rule::on_tape("s0", '1', "s1", TapeOp::ShiftLeft),
            Rule::on_tape("s1", '0', "s0", TapeOp::ShiftLeft),
            Rule::on_tape("s1", '1', "s1", TapeOp::ShiftLeft),
            Rule::on_tape("s1", BLANK, "sa", TapeOp::Identity),
        ]);
        let s = line_system();
        assert_eq!(run(&p, &s, "0101", 50).unwrap().outcome, Outcome::Accept);
        assert_eq!(run(&p, &s, "0110", 50).unwrap().outcome, Outcome::Reject);
        let r = run(&p, &s, "01", 50).unwrap();
        let lines = r.trace_lines();
        assert_eq!(lines.lines().count(), 3);
        let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
        assert_eq!(first["step"], 1);
        assert_eq!(first["action_kind"], "tape");
        assert_eq!(first["action_id"], "left");
        assert!(first.get("elapsed").is_none());
        assert!(matches!(
            run(&p, &s, "2", 5),
            Err(crate::Error::SymbolOutsideAlphabet { symbol: '2' })
        ));
    }
}
