//! Measurement times and the time-aware interpreter.

pub mod kappa;
pub mod run;

pub use kappa::{kappa_eval, ExtNat, KappaFn, KappaSpec, KappaTracker};
pub use run::timed_run;

use crate::machine::SystemDef;
use crate::numerics::precision_cap;

/// A computation system with a measurement time for every partition.
#[derive(Clone, Debug, PartialEq)]
pub struct TimedSystem {
    pub base: SystemDef,
    pub kappa: Vec<(String, KappaSpec)>,
}

impl TimedSystem {
    pub fn kappa(&self, partition: &str) -> Option<&KappaSpec> {
        self.kappa.iter().find(|(n, _)| n == partition).map(|(_, k)| k)
    }

    pub fn validate(&self) -> Vec<String> {
        let mut issues = self.base.validate(precision_cap());
        for (name, _) in &self.base.partitions {
            if self.kappa(name).is_none() {
                issues.push(format!("partition {name} has no measurement time"));
            }
        }
        for (name, spec) in &self.kappa {
            if self.base.partition(name).is_none() {
                issues.push(format!("measurement time for unknown partition {name}"));
            }
            if let Err(e) = spec.check() {
                issues.push(format!("measurement time of {name}: {e}"));
            }
        }
        issues
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{ClassicalMap, Partition, SetExpr};
    use crate::machine::{
        run, Action, Configuration, Element, Measurement, Outcome, PartitionRef, Program, Rule, Space,
        SystemDef, TapeOp, Transformation,
    };
    use crate::numerics::{int, rat};

    /// Unit interval cut at 1/3 and 2/3, starting at 1/2 so that the
    /// distance-to-thirds time is 6.
    fn system() -> TimedSystem {
        let cuts = [int(0), rat(1, 3), rat(2, 3), int(1)];
        let elements = (0..3)
            .map(|k| (format!("t{k}"), SetExpr::half_open(cuts[k].clone(), cuts[k + 1].clone())))
            .collect();
        let alpha = Partition::new(elements, SetExpr::half_open(int(0), int(1))).unwrap();
        TimedSystem {
            base: SystemDef {
                name: "thirds".into(),
                space: Space::Euclidean(SetExpr::half_open(int(0), int(1))),
                partitions: vec![("alpha".into(), Measurement::Classical(alpha))],
                transformations: vec![(
                    "shrink".into(),
                    Transformation::Classical(ClassicalMap::affine_1d(rat(1, 2), int(0))),
                )],
                initial: Configuration::Point(vec![rat(1, 2).into()]),
            },
            kappa: vec![(
                "alpha".into(),
                KappaSpec::InverseDistanceTo((0..4).map(|k| crate::numerics::RealValue::ratio(k, 3)).collect()),
            )],
        }
    }

    fn program(rules: Vec<Rule>) -> Program {
        Program {
            name: "p".into(),
            states: ["s0", "w", "w2", "sa", "sr"].map(String::from).to_vec(),
            initial: "s0".into(),
            accept: "sa".into(),
            reject: "sr".into(),
            alphabet: vec!['0', '1'],
            rules,
        }
    }

    fn on_alpha(from: &str, el: Element, to: &str, action: Action) -> Rule {
        Rule::new(from, PartitionRef::System("alpha".into()), el, to, action)
    }

    #[test]
    fn output_arrives_after_kappa_steps() {
        let rules = vec![
            Rule::new("s0", PartitionRef::Tape, Element::symbol('_'), "w", Action::Measure("alpha".into())),
            on_alpha("w", Element::Empty, "w", Action::Tape(TapeOp::Write('1'))),
            on_alpha("w", Element::label("t1"), "sa", Action::Tape(TapeOp::Identity)),
        ];
        let r = timed_run(&program(rules), &system(), "", 100).unwrap();
        assert_eq!(r.outcome, Outcome::Accept);
        // commence at step 1, five interim steps, output read at step 7
        assert_eq!(r.steps, 7);
        assert_eq!(r.trace[0].duration.as_deref(), Some("6"));
        assert_eq!(r.trace[5].elapsed, Some(6));
        assert_eq!(r.trace[5].completed_output, None);
        assert_eq!(r.trace[6].element, "t1");
        assert_eq!(r.trace[6].completed_output.as_deref(), Some("t1"));
    }

    #[test]
    fn transformation_interrupts_measurement() {
        let rules = vec![
            Rule::new("s0", PartitionRef::Tape, Element::symbol('_'), "w", Action::Measure("alpha".into())),
            on_alpha("w", Element::Empty, "w2", Action::Tape(TapeOp::Identity)),
            Rule::new("w2", PartitionRef::Tape, Element::symbol('_'), "w", Action::Transform("shrink".into())),
        ];
        let r = timed_run(&program(rules), &system(), "", 50).unwrap();
        // After the transformation no measurement is running: reject at step 3.
        assert_eq!((r.outcome, r.steps), (Outcome::Reject, 3));
        assert!(r.trace.iter().all(|e| e.completed_output.is_none()));
        assert_eq!(r.trace[2].pending_partition, None);
    }

    #[test]
    fn interrupted_at_interim_step_three() {
        // kappa = 6; the transformation lands on step 3 and the wait loop
        // keeps polling well past the original completion time.
        let rules = vec![
            Rule::new("s0", PartitionRef::Tape, Element::symbol('_'), "w", Action::Measure("alpha".into())),
            on_alpha("w", Element::Empty, "w2", Action::Tape(TapeOp::Write('1'))),
            Rule::new("w2", PartitionRef::Tape, Element::symbol('1'), "w", Action::Transform("shrink".into())),
            on_alpha("w", Element::label("t0"), "sa", Action::Tape(TapeOp::Identity)),
        ];
        let r = timed_run(&program(rules), &system(), "", 50).unwrap();
        assert_eq!(r.trace[2].action_kind, "transform");
        assert_eq!(r.outcome, Outcome::Reject);
        assert!(r.trace.iter().all(|e| e.completed_output.is_none()));
    }

    #[test]
    fn measurement_free_programs_match_untimed() {
        let rules = vec![
            on_alpha("s0", Element::label("t1"), "s0", Action::Transform("shrink".into())),
            on_alpha("s0", Element::label("t0"), "sa", Action::Tape(TapeOp::Write('1'))),
        ];
        let p = program(rules);
        let timed = timed_run(&p, &system(), "01", 20).unwrap();
        let untimed = run(&p, &system().base, "01", 20).unwrap();
        assert_eq!(timed, untimed);
        assert_eq!(timed.outcome, Outcome::Accept);
    }

    #[test]
    fn system_validation() {
        assert!(system().validate().is_empty());
        let mut s = system();
        s.kappa.clear();
        assert_eq!(s.validate(), vec!["partition alpha has no measurement time".to_string()]);
    }
}
