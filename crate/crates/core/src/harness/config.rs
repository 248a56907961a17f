use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{read_file, HarnessError};
use crate::deptree::AddConvention;
use crate::textmetrics::LixOptions;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplatePaths {
    pub lix: Option<PathBuf>,
    pub add: Option<PathBuf>,
}

fn default_budget() -> f64 {
    0.10
}

fn default_attempts() -> u32 {
    4
}

fn default_base_delay_ms() -> u64 {
    500
}

fn default_timeout_secs() -> u64 {
    120
}

/// A run configuration file. Relative paths are resolved against the
/// directory containing the file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    pub corpus: PathBuf,
    pub registry: PathBuf,
    pub cache_dir: PathBuf,
    pub output_dir: PathBuf,
    #[serde(default)]
    pub offline: bool,
    #[serde(default)]
    pub convention: AddConvention,
    #[serde(default)]
    pub templates: TemplatePaths,
    #[serde(default)]
    pub lix: LixOptions,
    /// Largest tolerated edit distance when aligning token streams, as a
    /// fraction of the longer stream.
    #[serde(default = "default_budget")]
    pub edit_budget: f64,
    #[serde(default = "default_attempts")]
    pub max_attempts: u32,
    #[serde(default = "default_base_delay_ms")]
    pub base_delay_ms: u64,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
}

impl HarnessConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = read_file(path)?;
        let mut cfg: HarnessConfig = toml::from_str(&text)
            .map_err(|e| HarnessError::Parse { path: path.display().to_string(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        resolve(&mut cfg.corpus);
        resolve(&mut cfg.registry);
        resolve(&mut cfg.cache_dir);
        resolve(&mut cfg.output_dir);
        if let Some(p) = cfg.templates.lix.as_mut() {
            resolve(p);
        }
        if let Some(p) = cfg.templates.add.as_mut() {
            resolve(p);
        }
        Ok(cfg)
    }
}
