//! Pipeline configuration file (TOML). Command-line flags override it.
//!
//! ```toml
//! seed = 7
//! n = 300
//! mix = "1:1:1"
//! out = "corpus"
//! workers = 4
//! strict = false
//! oldify_preset = "historical"
//!
//! [antiqua]            # overrides fields of the preset
//! jitter_amplitude = 1.0
//!
//! [rasterizer]
//! command = "rsvg-convert -w {width} -o {output} {input}"
//! width = 1000
//! timeout_secs = 60
//!
//! [topic_provider]
//! command = "python3 topics.py"
//! timeout_secs = 10
//!
//! [eval]
//! hit_threshold = 0.5
//! circular_hue = false
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use simvec_core::chart::Mix;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub mix: Option<String>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub strict: Option<bool>,
    pub oldify_preset: Option<String>,
    pub antiqua: Option<toml::Table>,
    pub rasterizer: Option<RasterizerConfig>,
    pub topic_provider: Option<ProviderConfig>,
    pub eval: Option<simvec_core::eval::EvalOptions>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RasterizerConfig {
    /// Argument template; `{input}`, `{output}` and `{width}` are replaced.
    pub command: String,
    #[serde(default = "default_width")]
    pub width: u32,
    #[serde(default = "default_raster_timeout")]
    pub timeout_secs: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub command: String,
    #[serde(default = "default_provider_timeout")]
    pub timeout_secs: u64,
}

fn default_width() -> u32 {
    1000
}

fn default_raster_timeout() -> u64 {
    60
}

fn default_provider_timeout() -> u64 {
    10
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("mix must look like bar:line:area with non-negative numbers, got `{0}`")]
    Mix(String),
    #[error("antiqua section: {0}")]
    Antiqua(String),
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })
    }

    /// Preset fields overridden by the `[antiqua]` table.
    pub fn antiqua_params(
        &self,
        preset: &str,
        seed: u64,
    ) -> Result<Option<simvec_core::antiqua::AntiquaParams>, ConfigError> {
        let Some(base) = simvec_core::antiqua::AntiquaParams::preset(preset, seed) else {
            return Err(ConfigError::Antiqua(format!("unknown preset `{preset}`")));
        };
        let Some(table) = &self.antiqua else { return Ok(Some(base)) };
        let base = simvec_core::antiqua::AntiquaParams { seed: 0, ..base };
        let mut merged = toml::Table::try_from(&base).map_err(|e| ConfigError::Antiqua(e.to_string()))?;
        for (k, v) in table {
            merged.insert(k.clone(), v.clone());
        }
        let mut params: simvec_core::antiqua::AntiquaParams =
            merged.try_into().map_err(|e: toml::de::Error| ConfigError::Antiqua(e.to_string()))?;
        if !table.contains_key("seed") {
            params.seed = seed;
        }
        Ok(Some(params))
    }
}

/// `bar:line:area` weights.
pub fn parse_mix(s: &str) -> Result<Mix, ConfigError> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| ConfigError::Mix(s.into()))?;
    match parts[..] {
        [bar, line, area] if parts.iter().all(|v| v.is_finite() && *v >= 0.0) && bar + line + area > 0.0 => {
            Ok(Mix { bar, line, area })
        }
        _ => Err(ConfigError::Mix(s.into())),
    }
}
