mod commands;
mod dsl;
mod env;
mod error;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use exactkit::cat::DEFAULT_BUDGET;

use crate::commands::{Report, Settings};
use crate::dsl::{Command, Kind, ModelSpec, RunOptions};
use crate::env::Env;
use crate::error::{CliError, EXIT_FAIL, EXIT_PASS};

/// Run checks on finite exact categories described in a model file.
///
/// Output is one JSON document on stdout. Exit status: 0 pass, 1 check
/// failed, 2 parse or usage error, 3 enumeration budget exceeded, 4 other.
#[derive(Parser)]
#[command(name = "exactkit", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
#[command(rename_all = "snake_case")]
enum Sub {
    /// Category laws on every hom generator.
    CheckAxioms(Target),
    /// Both variables of a bimodule send exact sequences to exact sequences.
    CheckBiexact(Target),
    /// Enumerate exact sequences and test kernels and pullbacks.
    CheckExactStructure(Target),
    /// Recover the bimodule of a split extension and rebuild it.
    Classify(Target),
    /// Bring every exact sequence of a semidirect product to normal form.
    Normalize(Target),
    /// Straighten S_p diagrams (p = 2 exhaustively, p = 3 by sampling).
    Straighten(Target),
    /// Grothendieck group of a category.
    K0(Target),
    /// Compare K0 of a semidirect product with K0 of its base.
    CompareK0(Target),
    /// Execute every `run` line of the file.
    Run(Common),
    /// Print the parsed declarations.
    Parse {
        specfile: String,
    },
}

#[derive(Args)]
struct Common {
    specfile: String,
    /// Cap on enumerated morphisms or sequences.
    #[arg(long, env = "EXACTKIT_MAX_ENUM", default_value_t = DEFAULT_BUDGET)]
    max_enum: usize,
    /// Report wall-clock time per command (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct Target {
    #[command(flatten)]
    common: Common,
    /// Declared name to run on; defaults to the target of the first matching `run` line.
    target: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Level of the S_p-construction.
    #[arg(long)]
    p: Option<usize>,
    /// Diagrams sampled at p = 3.
    #[arg(long)]
    samples: Option<usize>,
}

fn load(path: &str) -> Result<ModelSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })?;
    Ok(dsl::parse(&text)?)
}

fn run_one(
    env: &Env,
    command: Command,
    target: &str,
    options: &RunOptions,
    settings: &Settings,
    timings: bool,
) -> Result<(Report, Value), CliError> {
    let start = std::time::Instant::now();
    let report = commands::run(env, command, target, options, settings)?;
    let mut v = report.to_json();
    if timings {
        v["seconds"] = json!(start.elapsed().as_secs_f64());
    }
    Ok((report, v))
}

fn single(command: Command, args: Target) -> Result<(bool, Value), CliError> {
    let spec = load(&args.common.specfile)?;
    let from_file = spec.runs().find(|(c, _, _)| *c == command);
    let target = match (&args.target, from_file) {
        (Some(t), _) => t.clone(),
        (None, Some((_, t, _))) => t.to_string(),
        (None, None) => {
            return Err(CliError::Usage(format!(
                "no target given and `{}` has no `run {}` line",
                args.common.specfile,
                command.name()
            )))
        }
    };
    let kinds = spec.kinds();
    match kinds.get(target.as_str()) {
        None => return Err(CliError::Usage(format!("`{target}` is not declared"))),
        Some(&k) if k != command.target_kind() => {
            return Err(CliError::Usage(format!("{} cannot run on `{target}`", command.name())))
        }
        _ => {}
    }
    let mut options = match from_file {
        Some((_, t, o)) if t == target => o.clone(),
        _ => RunOptions::default(),
    };
    options.seed = args.seed.or(options.seed);
    options.p = args.p.or(options.p);
    options.samples = args.samples.or(options.samples);
    let env = Env::build(&spec)?;
    let settings = Settings { budget: args.common.max_enum };
    let (report, v) = run_one(&env, command, &target, &options, &settings, args.common.timings)?;
    Ok((report.passed, v))
}

fn run_all(args: Common) -> Result<(bool, Value), CliError> {
    let spec = load(&args.specfile)?;
    let env = Env::build(&spec)?;
    let settings = Settings { budget: args.max_enum };
    let mut all = true;
    let mut out = Vec::new();
    for (command, target, options) in spec.runs() {
        let (report, v) = run_one(&env, command, target, options, &settings, args.timings)?;
        all &= report.passed;
        out.push(v);
    }
    Ok((all, json!({ "status": if all { "pass" } else { "fail" }, "runs": out })))
}

fn dispatch(cli: Cli) -> Result<(bool, Value), CliError> {
    let command = match cli.command {
        Sub::Run(args) => return run_all(args),
        Sub::Parse { specfile } => {
            let spec = load(&specfile)?;
            let decls: Vec<Value> = spec
                .decls
                .iter()
                .map(|s| {
                    let mut v = serde_json::to_value(&s.decl).expect("declarations serialize");
                    v["line"] = json!(s.line);
                    v
                })
                .collect();
            let counts = json!({
                "rings": spec.count(Kind::Ring),
                "categories": spec.count(Kind::Category),
                "bimodules": spec.count(Kind::Bimodule),
                "runs": spec.runs().count(),
            });
            return Ok((true, json!({ "counts": counts, "declarations": decls, "text": spec.to_string() })));
        }
        Sub::CheckAxioms(t) => (Command::CheckAxioms, t),
        Sub::CheckBiexact(t) => (Command::CheckBiexact, t),
        Sub::CheckExactStructure(t) => (Command::CheckExactStructure, t),
        Sub::Classify(t) => (Command::Classify, t),
        Sub::Normalize(t) => (Command::Normalize, t),
        Sub::Straighten(t) => (Command::Straighten, t),
        Sub::K0(t) => (Command::K0, t),
        Sub::CompareK0(t) => (Command::CompareK0, t),
    };
    single(command.0, command.1)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let err = CliError::Usage(e.kind().to_string());
            let doc = json!({ "status": "error", "error": err.to_json(), "usage": e.render().to_string() });
            println!("{}", serde_json::to_string_pretty(&doc).expect("json output"));
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    let (code, doc) = match dispatch(cli) {
        Ok((passed, v)) => (if passed { EXIT_PASS } else { EXIT_FAIL }, v),
        Err(e) => (e.exit_code(), json!({ "status": "error", "error": e.to_json() })),
    };
    println!("{}", serde_json::to_string_pretty(&doc).expect("json output"));
    ExitCode::from(code as u8)
}
