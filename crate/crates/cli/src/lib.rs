//! Command-line harness for the discrepancy lab.
//!
//! A run is described by an [`ExperimentConfig`] (subcommand, typed
//! parameters, seed, time budget, output directory). [`run`] dispatches it to
//! the core library and persists a [`RunArtifact`] under the output
//! directory:
//!
//! * `result.json`: status, config snapshot and payload; identical bytes for
//!   identical configs.
//! * `envelope.json`: tool version, timestamps and wall-clock series.
//! * `config.toml`: the merged effective config, loadable with `--config`.
//! * `run.log`, plus module outputs (sequence, certificate or set files).
//!
//! Failures are also written to `error.json`. Exit codes: 0 success, 2 bad
//! input, 3 inconclusive, 4 verification rejection (1 if artifacts cannot be
//! written).

mod artifact;
mod cli;
mod commands;
mod config;
mod error;
pub mod schema;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map};

pub use artifact::{emit_plot_data, series, Envelope, RunArtifact, Status, ENVELOPE_FILE, RESULT_FILE};
pub use cli::{build_command, config_from_matches, main_with_args};
pub use config::{ExperimentConfig, Param, DEFAULT_OUTPUT_DIR, OUTPUT_DIR_ENV};
pub use error::{exit, CliError, Diagnostic};

use artifact::{write_file, ERROR_FILE, LOG_FILE};
use commands::{Ctx, RunLog};

fn unix_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64)
}

/// Validates `config`, runs it on a pool capped at `threads` workers and
/// persists the artifact (nothing is written in validate-only mode).
pub fn run(config: &ExperimentConfig) -> Result<RunArtifact, CliError> {
    config.validate()?;
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build a {t}-thread pool: {e}")))?
            .install(|| run_inner(config)),
        None => run_inner(config),
    }
}

fn run_inner(config: &ExperimentConfig) -> Result<RunArtifact, CliError> {
    if config.subcommand == "plot" {
        return run_plot(config);
    }
    let started = unix_ms();
    let dir = &config.output_dir;
    let log_path = (!config.validate_only).then(|| dir.join(LOG_FILE));
    if !config.validate_only {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut ctx = Ctx { cfg: config, log: RunLog::open(log_path.as_deref())?, timing: Map::new(), time_series: Map::new() };
    ctx.log.line(format!("start {} (seed {}, budget {} s)", config.subcommand, config.seed, config.time_budget));
    let (status, payload) = match commands::dispatch(&mut ctx) {
        Ok(done) => done,
        Err(e) => {
            ctx.log.line(format!("error: {e}"));
            if !config.validate_only {
                let diag = serde_json::to_string_pretty(&e.diagnostic())? + "\n";
                write_file(&dir.join(ERROR_FILE), &diag)?;
            }
            return Err(e);
        }
    };
    ctx.log.line(format!("finished with status {status:?}"));
    let mut timing = std::mem::take(&mut ctx.timing);
    if !ctx.time_series.is_empty() {
        timing.insert("series".into(), std::mem::take(&mut ctx.time_series).into());
    }
    let envelope = Envelope {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        started_unix_ms: started,
        finished_unix_ms: unix_ms(),
        log_path,
        timing: timing.into(),
    };
    let artifact = RunArtifact { config: config.clone(), status, payload, envelope: Some(envelope) };
    if !config.validate_only {
        let _ = std::fs::remove_file(dir.join(ERROR_FILE));
        artifact.save(dir)?;
    }
    Ok(artifact)
}

/// `plot` reads another run and writes one series; it leaves no artifact of
/// its own so it never overwrites the run it reads.
fn run_plot(config: &ExperimentConfig) -> Result<RunArtifact, CliError> {
    let source = config.path("artifact").ok_or_else(|| CliError::Usage("`artifact` is required".into()))?;
    let name = config.text("series").ok_or_else(|| CliError::Usage("`series` is required".into()))?;
    let loaded = RunArtifact::load(source)?;
    let table = emit_plot_data(&loaded, name)?;
    let run_dir = if source.is_dir() { source.to_path_buf() } else { source.parent().map(PathBuf::from).unwrap_or_default() };
    let out = config.path("output").map(PathBuf::from).unwrap_or_else(|| run_dir.join(format!("{name}.tsv")));
    if !config.validate_only {
        write_file(&out, &table)?;
    }
    let rows = table.lines().count().saturating_sub(1);
    Ok(RunArtifact {
        config: config.clone(),
        status: Status::Success,
        payload: json!({ "series_name": name, "rows": rows, "file": out }),
        envelope: None,
    })
}
