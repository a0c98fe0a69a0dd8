use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;
use crate::error::{exit, CliError};

pub const RESULT_FILE: &str = "result.json";
pub const ENVELOPE_FILE: &str = "envelope.json";
pub const CONFIG_FILE: &str = "config.toml";
pub const LOG_FILE: &str = "run.log";
pub const ERROR_FILE: &str = "error.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Success,
    /// A cap stopped the run before it could answer.
    Inconclusive,
    /// A certificate failed verification.
    Rejected,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => exit::SUCCESS,
            Status::Inconclusive => exit::INCONCLUSIVE,
            Status::Rejected => exit::REJECTED,
        }
    }
}

/// Run metadata that is allowed to differ between identical runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub tool_version: String,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub log_path: Option<PathBuf>,
    /// Wall-clock measurements, including time-indexed series.
    pub timing: Value,
}

/// Everything a run produced. `config`, `status` and `payload` are written
/// to `result.json` and are byte-identical for identical configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunArtifact {
    pub config: ExperimentConfig,
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub envelope: Option<Envelope>,
}

#[derive(Serialize)]
struct ResultDoc<'a> {
    status: Status,
    config: &'a ExperimentConfig,
    payload: &'a Value,
}

#[derive(Deserialize)]
struct ResultDocOwned {
    status: Status,
    config: ExperimentConfig,
    payload: Value,
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

impl RunArtifact {
    /// The deterministic part, as written to `result.json`.
    pub fn result_json(&self) -> Result<String, CliError> {
        let doc = ResultDoc { status: self.status, config: &self.config, payload: &self.payload };
        Ok(serde_json::to_string_pretty(&doc)? + "\n")
    }

    pub fn save(&self, dir: &Path) -> Result<(), CliError> {
        write_file(&dir.join(RESULT_FILE), &self.result_json()?)?;
        write_file(&dir.join(CONFIG_FILE), &self.config.to_toml()?)?;
        if let Some(env) = &self.envelope {
            write_file(&dir.join(ENVELOPE_FILE), &(serde_json::to_string_pretty(env)? + "\n"))?;
        }
        Ok(())
    }

    /// Loads from a run directory or a `result.json` path; the envelope is
    /// read when present next to it.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let result = if path.is_dir() { path.join(RESULT_FILE) } else { path.to_path_buf() };
        let text = fs::read_to_string(&result)
            .map_err(|e| CliError::Usage(format!("cannot read artifact {}: {e}", result.display())))?;
        let doc: ResultDocOwned = serde_json::from_str(&text)?;
        let mut config = doc.config;
        config.retype()?;
        let envelope = result
            .parent()
            .map(|d| d.join(ENVELOPE_FILE))
            .filter(|p| p.is_file())
            .map(|p| -> Result<Envelope, CliError> {
                let text = fs::read_to_string(&p).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", p.display())))?;
                Ok(serde_json::from_str(&text)?)
            })
            .transpose()?;
        Ok(RunArtifact { config, status: doc.status, payload: doc.payload, envelope })
    }

    /// Series names available to [`emit_plot_data`], payload first.
    pub fn series_names(&self) -> Vec<String> {
        let mut names: Vec<String> = series_map(&self.payload).map(|m| m.keys().cloned().collect()).unwrap_or_default();
        if let Some(env) = &self.envelope {
            names.extend(series_map(&env.timing).into_iter().flat_map(|m| m.keys().cloned()));
        }
        names
    }

    fn find_series(&self, name: &str) -> Option<&Value> {
        series_map(&self.payload)
            .and_then(|m| m.get(name))
            .or_else(|| self.envelope.as_ref().and_then(|e| series_map(&e.timing)).and_then(|m| m.get(name)))
    }
}

fn series_map(v: &Value) -> Option<&Map<String, Value>> {
    v.get("series").and_then(Value::as_object)
}

/// A named `(x, y)` series inside a payload.
pub fn series(x: &str, y: &str, points: impl IntoIterator<Item = (f64, f64)>) -> Value {
    let pts: Vec<[f64; 2]> = points.into_iter().map(|(a, b)| [a, b]).collect();
    json!({ "x": x, "y": y, "points": pts })
}

fn cell(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) => format!("{f}"),
            None => n.to_string(),
        },
        other => other.to_string(),
    }
}

/// Tab-separated `(x, y)` rows with a header line naming the columns.
pub fn emit_plot_data(artifact: &RunArtifact, name: &str) -> Result<String, CliError> {
    let s = artifact.find_series(name).ok_or_else(|| {
        let names = artifact.series_names();
        let list = if names.is_empty() { "none".to_string() } else { names.join(", ") };
        CliError::Usage(format!("unknown series `{name}`; available: {list}"))
    })?;
    let label = |k: &str| s.get(k).and_then(Value::as_str).unwrap_or(k).to_string();
    let mut out = format!("{}\t{}\n", label("x"), label("y"));
    for p in s.get("points").and_then(Value::as_array).map(Vec::as_slice).unwrap_or_default() {
        match p.as_array().map(Vec::as_slice) {
            Some([x, y]) => out.push_str(&format!("{}\t{}\n", cell(x), cell(y))),
            _ => return Err(CliError::Usage(format!("series `{name}` has a malformed point {p}"))),
        }
    }
    Ok(out)
}
