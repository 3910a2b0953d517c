use super::*;
use crate::gallery::{build_program, build_system, sample_runs, sample_systems};
use crate::machine::{run, Outcome};
use crate::numerics::{rat, RealValue};

const CPHI: &str = r#"
# doubling map with a cut at 5/8
system CPhi {
  space interval(0, 1, closed, open)
  partition alpha = cells(interval(0, 1, closed, open),
    "lo" = interval(0, 5/8, closed, open), "hi" = interval(5/8, 1, closed, open))
  transform T = piecewise(interval(0, 1, closed, open),
    interval(0, 1/2, closed, open) -> map[2*x1],
    interval(1/2, 1, closed, open) -> map[2*x1 + -1])
  initial point(5/8)
}

program first-digit {
  system CPhi
  alphabet "01"
  states s, t, yes, no
  initial s
  accept yes
  reject no
  rule (s, alpha, "lo", t, T)
  rule (s, alpha, "hi", yes, T)
  rule (t, alpha, "lo", no, T)
}
"#;

#[test]
fn parses_and_runs_a_source_example() {
    let model = parse_model(CPHI).unwrap();
    assert!(model.validate().is_empty(), "{:?}", model.validate());
    let p = model.program("first-digit").unwrap();
    let s = model.system("CPhi").unwrap().base();
    let r = run(&p.program, s, "", 10).unwrap();
    assert_eq!(r.outcome, Outcome::Accept);
    assert_eq!(r.config.point().unwrap(), &vec![RealValue::ratio(1, 4)]);
}

#[test]
fn empty_elements_and_rule_order() {
    let src = r#"program p {
      alphabet "01"
      states a, b, ok, ko
      initial a
      accept ok
      reject ko
      rule (a, alpha, EMPTY, a, id)
      rule (a, alpha, "lo", b, measure(alpha))
      rule (b, tape, "0", ok, tape(write "1"))
    }"#;
    let model = parse_model(src).unwrap();
    let rules = &model.programs[0].program.rules;
    assert_eq!(rules[0].element, crate::machine::Element::Empty);
    assert_eq!(rules[1].action, crate::machine::Action::Measure("alpha".into()));
    assert_eq!(rules[2].from, "b");
    assert_eq!(parse_model(&render(&model)).unwrap(), model);
}

#[test]
fn rationals_are_normalised() {
    let src = "system s { space interval(0, 2/4, closed, closed) initial point(-6/4) }";
    let model = parse_model(src).unwrap();
    let text = render(&model);
    assert!(text.contains("interval(0, 1/2, closed, closed)"), "{text}");
    assert!(text.contains("point(-3/2)"), "{text}");
    let s = model.systems[0].base();
    assert_eq!(s.initial.point().unwrap()[0], RealValue::Exact(rat(-3, 2)));
}

#[test]
fn zero_denominator_is_located() {
    let parsed = parse("system s {\n  space interval(0, 1/0, closed, open)\n  initial point(0)\n}");
    assert_eq!(parsed.diagnostics, vec![Diagnostic::new(2, 21, "zero denominator")]);
}

#[test]
fn recovery_reports_each_broken_block() {
    let src = "system a { space bogus(1) initial point(0) }\n\
               advice g = prng(3)\n\
               program p { alphabet \"01\" states x initial x accept y }\n\
               system b { space interval(-inf, inf, open, open) initial point(1) }";
    let parsed = parse(src);
    assert_eq!(parsed.diagnostics.len(), 2, "{:?}", parsed.diagnostics);
    assert!(parsed.diagnostics[0].message.contains("unknown set form"));
    assert!(parsed.diagnostics[1].message.contains("no reject state"));
    assert_eq!(parsed.model.advice.len(), 1);
    assert_eq!(parsed.model.systems.len(), 1);
}

#[test]
fn advice_names_resolve_in_encodings() {
    let src = "advice g = word(\"10110\", \"01\") schedule log(2)\n\
               system s { space interval(0, 1, closed, closed) initial point(encode(ternary, g)) }";
    let model = parse_model(src).unwrap();
    let text = render(&model);
    assert!(text.contains("encode(ternary, word(\"10110\", \"01\"))"), "{text}");
    assert_eq!(parse_model(&text).unwrap(), model);
}

#[test]
fn gallery_round_trips() {
    let mut model = Model::default();
    for id in sample_systems() {
        model.systems.push(build_system(&id).unwrap());
    }
    for r in sample_runs() {
        let program = build_program(&r.program).unwrap();
        let system = build_system(&r.system).unwrap().base().name.clone();
        model.programs.push(ModelProgram { program, system: Some(system) });
    }
    let text = render(&model);
    let back = parse_model(&text).unwrap_or_else(|d| panic!("{d:?}"));
    assert!(back == model, "round trip changed the model");
    assert_eq!(render(&back), text);
}

#[test]
fn digit_streams_and_lazy_values() {
    let src = "system s { space interval(0, 1, closed, closed) \
               initial point(sum(stream base=2 \"1(01)\", affine(1/2, 1/4, stream base=3 \"12\"))) }";
    let model = parse_model(src).unwrap();
    let text = render(&model);
    assert!(text.contains("stream base=2 \"1(01)\""), "{text}");
    assert_eq!(parse_model(&text).unwrap(), model);
    let bad = parse("system s { space interval(0, 1, closed, closed) initial point(stream base=2 \"13\") }");
    assert!(bad.diagnostics[0].message.contains("out of range"), "{:?}", bad.diagnostics);
}
