use std::process::Command;

use compsys::dsl::{parse_model, render, Model, ModelProgram};
use compsys::gallery::{build_program, build_system, sample_runs, sample_systems};

fn round_trip(label: &str, model: &Model) -> Result<(), String> {
    let text = render(model);
    let back = parse_model(&text).map_err(|d| format!("{label}: reparse failed: {d:?}"))?;
    if back != *model {
        return Err(format!("{label}: reparsed model differs"));
    }
    if render(&back) != text {
        return Err(format!("{label}: rendering is not canonical"));
    }
    Ok(())
}

fn validate_status(source: Option<&str>) -> Result<i32, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("model.cs");
    if let Some(text) = source {
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
    }
    let out = Command::new(env!("CARGO_BIN_EXE_compsys"))
        .arg("validate")
        .arg(&path)
        .output()
        .map_err(|e| e.to_string())?;
    out.status.code().ok_or_else(|| "validate killed by a signal".into())
}

pub fn round_trip_all() -> super::Outcome {
    let mut items = 0;
    let mut everything = Model::default();
    for id in sample_systems() {
        let system = build_system(&id).map_err(|e| e.to_string())?;
        let model = Model { systems: vec![system.clone()], ..Model::default() };
        round_trip(&format!("system {id:?}"), &model)?;
        everything.systems.push(system);
        items += 1;
    }
    for r in sample_runs() {
        let program = build_program(&r.program).map_err(|e| e.to_string())?;
        let system = build_system(&r.system).map_err(|e| e.to_string())?;
        let bound = ModelProgram { program, system: Some(system.base().name.clone()) };
        let model = Model { systems: vec![system], programs: vec![bound.clone()], ..Model::default() };
        round_trip(&format!("program {:?}", r.program), &model)?;
        if !everything.programs.contains(&bound) {
            everything.programs.push(bound);
        }
        items += 1;
    }
    round_trip("whole gallery", &everything)?;

    let valid = render(&everything);
    let cases = [
        ("gallery source", Some(valid.as_str()), 0),
        ("zero denominator", Some("system s { space interval(0, 1/0, closed, closed) }"), 1),
        ("unknown keyword", Some("sistem s { }"), 1),
        (
            "undeclared state",
            Some("program p { alphabet \"01\" states a, acc, rej initial a accept acc reject rej rule (b, tape, \"0\", acc, tape(id)) }"),
            1,
        ),
        ("missing file", None, 3),
    ];
    for (name, source, want) in cases {
        let got = validate_status(source)?;
        if got != want {
            return Err(format!("validate on {name}: exit {got}, expected {want}"));
        }
    }
    Ok(format!("{items}/{items} gallery items and the combined model round-trip; {} validate exit codes match", cases.len()))
}
