//! Harness configuration file handling.
//!
//! The config is TOML with an `[endpoint]` table for the chat API and an
//! optional `[run]` table for execution knobs; see
//! `config/harness.example.toml`. The API credential itself never appears in
//! the file or in any output: only the NAME of the environment variable that
//! holds it is configured.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

use crate::harness::grade::GradingMode;

/// Where and how to reach the evaluated model.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    /// API root; `/chat/completions` is appended.
    pub base_url: String,
    /// Model identifier sent in the request body.
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub credential_env: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
}

impl EndpointConfig {
    pub fn timeout(&self) -> Duration {
        Duration::from_secs(self.timeout_secs)
    }
}

/// Execution knobs.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Bounded in-flight requests for live runs.
    pub parallelism: usize,
    pub grading: GradingMode,
    /// Optional cue lexicon path, resolved relative to the config file;
    /// the built-in lexicon is used when absent.
    pub cues: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            parallelism: default_parallelism(),
            grading: GradingMode::default(),
            cues: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    pub endpoint: EndpointConfig,
    #[serde(default)]
    pub run: RunConfig,
}

fn default_timeout_secs() -> u64 {
    120
}

fn default_max_retries() -> u32 {
    2
}

fn default_parallelism() -> usize {
    4
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed config {path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
}

/// Loads a config file, resolving a relative cue lexicon path against the
/// config's directory.
pub fn load_config(path: &Path) -> Result<HarnessConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    let mut config: HarnessConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_owned(),
        source,
    })?;
    if let Some(cues) = &config.run.cues {
        if cues.is_relative() {
            if let Some(dir) = path.parent() {
                config.run.cues = Some(dir.join(cues));
            }
        }
    }
    Ok(config)
}
