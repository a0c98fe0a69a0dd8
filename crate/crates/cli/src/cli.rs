use std::ffi::OsString;
use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::parser::ValueSource;
use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};
use serde_json::{json, Value};

use crate::artifact::{RunArtifact, Status};
use crate::config::{ExperimentConfig, Param};
use crate::error::{exit, CliError};
use crate::schema::{Kind, COMMANDS};

pub fn build_command() -> Command {
    let mut root = Command::new("edlab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Discrepancy and progression-free-set experiments")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(global("seed", "RNG seed [default: 0]").value_parser(value_parser!(u64)))
        .arg(global("time-budget", "wall-clock budget in seconds [default: 60]").value_parser(value_parser!(f64)))
        .arg(global("threads", "cap on worker threads").value_parser(value_parser!(usize)))
        .arg(
            global("output-dir", "run directory [default: $EDLAB_OUTPUT_DIR or ./edlab-runs]")
                .value_parser(value_parser!(PathBuf)),
        )
        .arg(global("config", "TOML config file; flags override its values").value_parser(value_parser!(PathBuf)))
        .arg(
            Arg::new("validate-only")
                .long("validate-only")
                .global(true)
                .action(ArgAction::SetTrue)
                .help("check inputs without running"),
        );
    for spec in COMMANDS {
        let mut sub = Command::new(spec.name).about(spec.about);
        let mut index = 1;
        for p in spec.params {
            let help = match p.default {
                Some(d) => format!("{} [default: {d}]", p.help),
                None => p.help.to_string(),
            };
            let mut arg = Arg::new(p.key).help(help);
            if p.positional {
                arg = arg.index(index);
                index += 1;
            } else {
                arg = arg.long(p.flag());
            }
            arg = match p.kind {
                Kind::Bool => arg.action(ArgAction::SetTrue),
                Kind::Choice(cs) => arg.action(ArgAction::Set).value_parser(PossibleValuesParser::new(cs.iter().copied())),
                _ => arg.action(ArgAction::Set),
            };
            sub = sub.arg(arg);
        }
        root = root.subcommand(sub);
    }
    root
}

fn global(id: &'static str, help: &'static str) -> Arg {
    Arg::new(id).long(id).global(true).action(ArgAction::Set).help(help)
}

fn from_command_line(m: &ArgMatches, id: &str) -> bool {
    m.value_source(id) == Some(ValueSource::CommandLine)
}

/// Merges defaults, the optional config file and the flags, in that order.
pub fn config_from_matches(m: &ArgMatches) -> Result<ExperimentConfig, CliError> {
    let (name, sub) = m.subcommand().ok_or_else(|| CliError::Usage("no subcommand given".into()))?;
    let mut cfg = ExperimentConfig::new(name)?;
    let cwd = std::env::current_dir().map_err(|e| CliError::io(".", e))?;
    if let Some(path) = sub.get_one::<PathBuf>("config") {
        let path = cwd.join(path);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        cfg.merge_toml(&text, path.parent().unwrap_or(&cwd))?;
    }
    if let Some(&seed) = sub.get_one::<u64>("seed") {
        cfg.seed = seed;
    }
    if let Some(&budget) = sub.get_one::<f64>("time-budget") {
        cfg.time_budget = budget;
    }
    if let Some(&threads) = sub.get_one::<usize>("threads") {
        cfg.threads = Some(threads);
    }
    if let Some(dir) = sub.get_one::<PathBuf>("output-dir") {
        cfg.output_dir = cwd.join(dir);
    }
    cfg.validate_only = sub.get_flag("validate-only");
    let spec = cfg.spec()?;
    for p in spec.params {
        if !from_command_line(sub, p.key) {
            continue;
        }
        if p.kind == Kind::Bool {
            cfg.params.insert(p.key.to_string(), Param::Bool(true));
        } else if let Some(raw) = sub.get_one::<String>(p.key) {
            cfg.set(p.key, raw)?;
        }
    }
    Ok(cfg)
}

/// Payload without its series, for the terminal.
fn summary(artifact: &RunArtifact) -> Value {
    let mut payload = artifact.payload.clone();
    if let Some(obj) = payload.as_object_mut() {
        if let Some(series) = obj.remove("series") {
            let names: Vec<String> = series.as_object().map(|m| m.keys().cloned().collect()).unwrap_or_default();
            obj.insert("series_available".into(), json!(names));
        }
    }
    json!({
        "subcommand": artifact.config.subcommand,
        "status": artifact.status,
        "output_dir": artifact.config.output_dir,
        "result": payload,
    })
}

/// Full command-line entry point; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match build_command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { exit::BAD_INPUT } else { exit::SUCCESS };
            let _ = e.print();
            return code;
        }
    };
    let outcome = config_from_matches(&matches).and_then(|cfg| crate::run(&cfg));
    match outcome {
        Ok(artifact) => {
            println!("{}", serde_json::to_string_pretty(&summary(&artifact)).unwrap_or_default());
            if artifact.status == Status::Rejected {
                eprintln!("{}", json!({ "error": "rejected", "rejection": artifact.payload.get("rejection") }));
            }
            artifact.status.exit_code()
        }
        Err(e) => {
            eprintln!("{}", serde_json::to_string(&e.diagnostic()).unwrap_or_else(|_| e.to_string()));
            e.exit_code()
        }
    }
}
