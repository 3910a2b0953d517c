use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use compsys::dsl::{self, Model, ModelProgram};
use compsys::gallery::{self, BuiltSystem, Params};
use compsys::machine::{run, Outcome, Program, RunResult};
use compsys::numerics::set_precision_cap;
use compsys::timed::timed_run;

const ERROR: u8 = 3;

/// Simulator for computation systems driven by rule programs.
#[derive(Parser)]
#[command(name = "compsys", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a definition file.
    Validate { file: PathBuf },
    /// Run a program of a definition file on one of its systems.
    Run {
        file: PathBuf,
        #[arg(long)]
        program: String,
        /// Defaults to the system named by the program.
        #[arg(long)]
        system: Option<String>,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        step_limit: u64,
        /// Use measurement times (the system must be a timed system).
        #[arg(long)]
        timed: bool,
        #[arg(long)]
        precision_cap: Option<u32>,
        /// Write the trace, one JSON event per line.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Built-in systems and programs.
    Gallery {
        #[command(subcommand)]
        command: GalleryCommand,
    },
}

#[derive(Subcommand)]
enum GalleryCommand {
    /// List system and program ids with their parameters.
    List,
    /// Run a gallery program on its system, e.g. `gallery run extract-binary-digits n=4 phi=5/8`.
    Run {
        id: String,
        params: Vec<String>,
        #[arg(long, default_value_t = 100_000_000)]
        step_limit: u64,
        #[arg(long)]
        precision_cap: Option<u32>,
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Print a gallery system or program (with its system) as definition source.
    Show { id: String, params: Vec<String> },
}

type CliResult<T> = Result<T, String>;

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        ExitCode::from(ERROR)
    })
}

fn load(path: &Path) -> Result<Model, ExitCode> {
    let text = read(path)?;
    dsl::parse_model(&text).map_err(|diags| {
        for d in diags {
            eprintln!("{}:{d}", path.display());
        }
        ExitCode::from(ERROR)
    })
}

fn validate(path: &Path) -> ExitCode {
    let text = match read(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed = dsl::parse(&text);
    for d in &parsed.diagnostics {
        eprintln!("{}:{d}", path.display());
    }
    let issues = parsed.model.validate();
    for i in &issues {
        eprintln!("{}: {i}", path.display());
    }
    if parsed.diagnostics.is_empty() && issues.is_empty() {
        let m = &parsed.model;
        println!(
            "ok: {} advice, {} systems, {} programs",
            m.advice.len(),
            m.systems.len(),
            m.programs.len()
        );
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn execute(
    program: &Program,
    system: &BuiltSystem,
    input: &str,
    step_limit: u64,
    timed: bool,
) -> CliResult<RunResult> {
    let r = match (timed, system) {
        (true, BuiltSystem::Timed(t)) => timed_run(program, t, input, step_limit),
        (true, BuiltSystem::Plain(s)) => {
            return Err(format!("system {} has no measurement times", s.name));
        }
        (false, s) => run(program, s.base(), input, step_limit),
    };
    r.map_err(|e| e.to_string())
}

fn report(r: &RunResult, trace: Option<&Path>) -> CliResult<ExitCode> {
    if let Some(path) = trace {
        let f = File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut w = BufWriter::new(f);
        r.write_trace(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let outcome = match r.outcome {
        Outcome::Accept => "accept",
        Outcome::Reject => "reject",
        Outcome::OutOfSteps => "out-of-steps",
    };
    println!("outcome: {outcome}");
    println!("steps: {}", r.steps);
    println!("state: {}", r.state);
    println!("tape: {}", r.tape.contents());
    println!("configuration: {}", r.config.render());
    Ok(ExitCode::from(match r.outcome {
        Outcome::Accept => 0,
        Outcome::Reject => 1,
        Outcome::OutOfSteps => 2,
    }))
}

fn run_file(
    file: &Path,
    program: &str,
    system: Option<&str>,
    input: &str,
    step_limit: u64,
    timed: bool,
    trace: Option<&Path>,
) -> Result<ExitCode, ExitCode> {
    let model = load(file)?;
    let fail = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(ERROR)
    };
    let p = model
        .program(program)
        .ok_or_else(|| fail(format!("no program {program}")))?;
    let sys_name = system
        .or(p.system.as_deref())
        .ok_or_else(|| fail(format!("program {program} names no system; pass --system")))?;
    let s = model
        .system(sys_name)
        .ok_or_else(|| fail(format!("no system {sys_name}")))?;
    let r = execute(&p.program, s, input, step_limit, timed).map_err(fail)?;
    report(&r, trace).map_err(fail)
}

fn gallery_list() {
    let all = gallery::SYSTEMS.iter().chain(&gallery::PROGRAMS);
    let width = all.map(|e| e.params.len()).max().unwrap_or(0);
    for (title, entries) in [("systems", &gallery::SYSTEMS[..]), ("programs", &gallery::PROGRAMS[..])] {
        println!("{title}:");
        for e in entries {
            println!("  {:<24} {:<width$}  {}", e.name, e.params, e.about);
        }
    }
}

fn gallery_run(id: &str, params: &[String], step_limit: u64, trace: Option<&Path>) -> CliResult<ExitCode> {
    let p = Params::parse(params).map_err(|e| e.to_string())?;
    let g = gallery::run_from_name(id, &p).map_err(|e| e.to_string())?;
    let program = gallery::build_program(&g.program).map_err(|e| e.to_string())?;
    let system = gallery::build_system(&g.system).map_err(|e| e.to_string())?;
    println!("program: {} on {}", program.name, g.system);
    let r = execute(&program, &system, &g.input, step_limit, g.timed())?;
    report(&r, trace)
}

fn gallery_show(id: &str, params: &[String]) -> CliResult<()> {
    let p = Params::parse(params).map_err(|e| e.to_string())?;
    let model = match gallery::system_from_name(id, &p) {
        Ok(sid) => Model {
            systems: vec![gallery::build_system(&sid).map_err(|e| e.to_string())?],
            ..Model::default()
        },
        Err(compsys::Error::UnknownReference(_)) => {
            let g = gallery::run_from_name(id, &p).map_err(|e| e.to_string())?;
            let system = gallery::build_system(&g.system).map_err(|e| e.to_string())?;
            let program = gallery::build_program(&g.program).map_err(|e| e.to_string())?;
            let name = system.base().name.clone();
            Model {
                systems: vec![system],
                programs: vec![ModelProgram { program, system: Some(name) }],
                ..Model::default()
            }
        }
        Err(e) => return Err(e.to_string()),
    };
    print!("{}", dsl::render(&model));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Validate { file } => return validate(&file),
        Command::Run { file, program, system, input, step_limit, timed, precision_cap, trace } => {
            if let Some(k) = precision_cap {
                set_precision_cap(k);
            }
            return run_file(&file, &program, system.as_deref(), &input, step_limit, timed, trace.as_deref())
                .unwrap_or_else(|code| code);
        }
        Command::Gallery { command } => match command {
            GalleryCommand::List => {
                gallery_list();
                Ok(ExitCode::SUCCESS)
            }
            GalleryCommand::Run { id, params, step_limit, precision_cap, trace } => {
                if let Some(k) = precision_cap {
                    set_precision_cap(k);
                }
                gallery_run(&id, &params, step_limit, trace.as_deref())
            }
            GalleryCommand::Show { id, params } => gallery_show(&id, &params).map(|_| ExitCode::SUCCESS),
        },
    };
    outcome.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        ExitCode::from(ERROR)
    })
}
