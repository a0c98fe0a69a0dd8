use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::schema::{command_spec, CommandSpec, Kind, ParamSpec};

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_ENV: &str = "EDLAB_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "edlab-runs";
pub const DEFAULT_TIME_BUDGET: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Param {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    Path(PathBuf),
}

/// A fully merged run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub subcommand: String,
    pub seed: u64,
    /// Seconds.
    pub time_budget: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub params: BTreeMap<String, Param>,
    /// Check inputs only; never snapshotted.
    #[serde(skip)]
    pub validate_only: bool,
}

fn absolute(path: &Path, base: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

fn cwd() -> Result<PathBuf, CliError> {
    std::env::current_dir().map_err(|e| CliError::io(".", e))
}

impl ExperimentConfig {
    /// Defaults for `subcommand`; the output directory comes from
    /// [`OUTPUT_DIR_ENV`] when set.
    pub fn new(subcommand: &str) -> Result<Self, CliError> {
        let spec = Self::spec_of(subcommand)?;
        let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_OUTPUT_DIR.into());
        let mut cfg = ExperimentConfig {
            subcommand: spec.name.to_string(),
            seed: 0,
            time_budget: DEFAULT_TIME_BUDGET,
            threads: None,
            output_dir: absolute(&dir, &cwd()?),
            params: BTreeMap::new(),
            validate_only: false,
        };
        for p in spec.params {
            if let Some(d) = p.default {
                cfg.params.insert(p.key.to_string(), parse_value(p, d, Path::new(""))?);
            }
        }
        Ok(cfg)
    }

    fn spec_of(name: &str) -> Result<&'static CommandSpec, CliError> {
        command_spec(name).ok_or_else(|| CliError::Usage(format!("unknown subcommand `{name}`")))
    }

    pub fn spec(&self) -> Result<&'static CommandSpec, CliError> {
        Self::spec_of(&self.subcommand)
    }

    /// Sets a parameter from its textual form; relative paths resolve
    /// against the working directory.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<(), CliError> {
        let spec = self.spec()?;
        let p = spec.param(key).ok_or_else(|| unknown_key(spec, key))?;
        let value = parse_value(p, raw, &cwd()?)?;
        self.params.insert(key.to_string(), value);
        Ok(())
    }

    /// Merges a TOML config file. Relative paths inside it resolve against
    /// the file's directory. Unknown keys are rejected.
    pub fn merge_toml(&mut self, text: &str, base_dir: &Path) -> Result<(), CliError> {
        let doc: toml::Table = toml::from_str(text).map_err(|e| CliError::Usage(format!("config file: {e}")))?;
        let spec = self.spec()?;
        for (key, value) in &doc {
            match key.as_str() {
                "subcommand" => {
                    if value.as_str() != Some(spec.name) {
                        return Err(CliError::Usage(format!(
                            "config file is for subcommand {value}, but `{}` was requested",
                            spec.name
                        )));
                    }
                }
                "seed" => {
                    self.seed = value
                        .as_integer()
                        .and_then(|v| u64::try_from(v).ok())
                        .ok_or_else(|| CliError::Usage("seed must be a non-negative integer".into()))?
                }
                "time_budget" => self.time_budget = toml_real(value).ok_or_else(|| CliError::Usage("time_budget must be a number".into()))?,
                "threads" => {
                    self.threads = Some(
                        value
                            .as_integer()
                            .and_then(|v| usize::try_from(v).ok())
                            .ok_or_else(|| CliError::Usage("threads must be a non-negative integer".into()))?,
                    )
                }
                "output_dir" => {
                    let s = value.as_str().ok_or_else(|| CliError::Usage("output_dir must be a string".into()))?;
                    self.output_dir = absolute(Path::new(s), base_dir);
                }
                "params" => {
                    let table = value.as_table().ok_or_else(|| CliError::Usage("[params] must be a table".into()))?;
                    for (k, v) in table {
                        let p = spec.param(k).ok_or_else(|| unknown_key(spec, k))?;
                        self.params.insert(k.clone(), from_toml(p, v, base_dir)?);
                    }
                }
                other => return Err(CliError::Usage(format!("unknown config key `{other}`"))),
            }
        }
        Ok(())
    }

    /// Checks required parameters, types and global settings.
    pub fn validate(&self) -> Result<(), CliError> {
        let spec = self.spec()?;
        for (k, v) in &self.params {
            let p = spec.param(k).ok_or_else(|| unknown_key(spec, k))?;
            check_type(p, v)?;
        }
        if let Some(p) = spec.params.iter().find(|p| p.required && !self.params.contains_key(p.key)) {
            return Err(CliError::Usage(format!("missing required parameter `{}`", p.key)));
        }
        if !(self.time_budget.is_finite() && self.time_budget > 0.0) {
            return Err(CliError::Usage("time budget must be a positive number of seconds".into()));
        }
        if self.threads == Some(0) {
            return Err(CliError::Usage("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// The merged configuration as TOML.
    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("cannot serialise config: {e}")))
    }

    /// Restores typed parameters after an untyped round trip (paths read
    /// back as text).
    pub fn retype(&mut self) -> Result<(), CliError> {
        let spec = self.spec()?;
        for (k, v) in self.params.iter_mut() {
            let p = spec.param(k).ok_or_else(|| unknown_key(spec, k))?;
            match (p.kind, &*v) {
                (Kind::Path, Param::Text(s)) => *v = Param::Path(PathBuf::from(s)),
                (Kind::Real, Param::Int(i)) => *v = Param::Real(*i as f64),
                _ => {}
            }
        }
        Ok(())
    }

    pub fn int(&self, key: &str) -> Option<i64> {
        match self.params.get(key) {
            Some(Param::Int(v)) => Some(*v),
            _ => None,
        }
    }

    /// A non-negative integer parameter as `usize`.
    pub fn count(&self, key: &str) -> Result<Option<usize>, CliError> {
        self.int(key)
            .map(|v| usize::try_from(v).map_err(|_| CliError::Usage(format!("`{key}` must be non-negative, got {v}"))))
            .transpose()
    }

    pub fn require_count(&self, key: &str) -> Result<usize, CliError> {
        self.count(key)?.ok_or_else(|| CliError::Usage(format!("parameter `{key}` is required here")))
    }

    pub fn real(&self, key: &str) -> Option<f64> {
        match self.params.get(key) {
            Some(Param::Real(v)) => Some(*v),
            Some(Param::Int(v)) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn flag(&self, key: &str) -> bool {
        matches!(self.params.get(key), Some(Param::Bool(true)))
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key) {
            Some(Param::Text(s)) => Some(s),
            _ => None,
        }
    }

    pub fn path(&self, key: &str) -> Option<&Path> {
        match self.params.get(key) {
            Some(Param::Path(p)) => Some(p),
            _ => None,
        }
    }
}

fn unknown_key(spec: &CommandSpec, key: &str) -> CliError {
    let known: Vec<&str> = spec.params.iter().map(|p| p.key).collect();
    CliError::Usage(format!("unknown parameter `{key}` for `{}` (known: {})", spec.name, known.join(", ")))
}

fn toml_real(v: &toml::Value) -> Option<f64> {
    v.as_float().or_else(|| v.as_integer().map(|i| i as f64))
}

fn type_error(p: &ParamSpec, got: impl std::fmt::Display) -> CliError {
    let want = match p.kind {
        Kind::Int => "an integer".to_string(),
        Kind::Real => "a number".to_string(),
        Kind::Bool => "true or false".to_string(),
        Kind::Path => "a path".to_string(),
        Kind::Text => "a string".to_string(),
        Kind::Choice(cs) => format!("one of {}", cs.join(", ")),
    };
    CliError::Usage(format!("parameter `{}` expects {want}, got {got}", p.key))
}

fn parse_value(p: &ParamSpec, raw: &str, base: &Path) -> Result<Param, CliError> {
    match p.kind {
        Kind::Int => raw.trim().parse().map(Param::Int).map_err(|_| type_error(p, raw)),
        Kind::Real => raw.trim().parse().map(Param::Real).map_err(|_| type_error(p, raw)),
        Kind::Bool => raw.trim().parse().map(Param::Bool).map_err(|_| type_error(p, raw)),
        Kind::Path => Ok(Param::Path(absolute(Path::new(raw), base))),
        Kind::Text => Ok(Param::Text(raw.to_string())),
        Kind::Choice(cs) => {
            if cs.contains(&raw) {
                Ok(Param::Text(raw.to_string()))
            } else {
                Err(type_error(p, raw))
            }
        }
    }
}

fn from_toml(p: &ParamSpec, v: &toml::Value, base: &Path) -> Result<Param, CliError> {
    match (p.kind, v) {
        (Kind::Int, toml::Value::Integer(i)) => Ok(Param::Int(*i)),
        (Kind::Real, v) if toml_real(v).is_some() => Ok(Param::Real(toml_real(v).unwrap_or_default())),
        (Kind::Bool, toml::Value::Boolean(b)) => Ok(Param::Bool(*b)),
        (Kind::Path | Kind::Text | Kind::Choice(_), toml::Value::String(s)) => parse_value(p, s, base),
        _ => Err(type_error(p, v)),
    }
}

fn check_type(p: &ParamSpec, v: &Param) -> Result<(), CliError> {
    let ok = match (p.kind, v) {
        (Kind::Int, Param::Int(_)) | (Kind::Real, Param::Real(_)) | (Kind::Bool, Param::Bool(_)) => true,
        (Kind::Path, Param::Path(_)) | (Kind::Text, Param::Text(_)) => true,
        (Kind::Choice(cs), Param::Text(s)) => cs.contains(&s.as_str()),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(type_error(p, format!("{v:?}")))
    }
}
