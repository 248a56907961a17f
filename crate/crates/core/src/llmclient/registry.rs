use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ProviderFamily;

/// Sampling settings sent with every request; `None` leaves the provider
/// default in place. Part of the cache key.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RequestParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tokens: Option<u32>,
}

fn default_concurrency() -> usize {
    2
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRecord {
    pub model_id: String,
    pub display_name: String,
    /// MMLU accuracy in percent.
    pub mmlu_score: f64,
    /// Blank for models that can only be replayed from cache.
    #[serde(default)]
    pub endpoint: String,
    #[serde(default)]
    pub auth_env_var: String,
    #[serde(default)]
    pub provider: ProviderFamily,
    /// Model name sent to the provider, when it differs from `model_id`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api_model: Option<String>,
    #[serde(default)]
    pub request_params: RequestParams,
    #[serde(default = "default_concurrency")]
    pub max_concurrency: usize,
}

impl ModelRecord {
    pub fn new(model_id: impl Into<String>, display_name: impl Into<String>, mmlu_score: f64) -> Self {
        Self {
            model_id: model_id.into(),
            display_name: display_name.into(),
            mmlu_score,
            endpoint: String::new(),
            auth_env_var: String::new(),
            provider: ProviderFamily::default(),
            api_model: None,
            request_params: RequestParams::default(),
            max_concurrency: default_concurrency(),
        }
    }

    pub fn api_model(&self) -> &str {
        self.api_model.as_deref().unwrap_or(&self.model_id)
    }
}

/// A published correlation to print next to the recomputed one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferenceCorrelation {
    /// `lix_error`, `add_diff_1`, `add_diff_2` or `uas_micro`.
    pub metric: String,
    pub r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Registry {
    #[serde(default, rename = "model")]
    pub models: Vec<ModelRecord>,
    #[serde(default, rename = "reference_correlation", skip_serializing_if = "Vec::is_empty")]
    pub reference_correlations: Vec<ReferenceCorrelation>,
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("reading registry {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing registry: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("model `{model_id}`: MMLU score {score} is outside [0, 100]")]
    MmluRange { model_id: String, score: f64 },
    #[error("model `{0}` is listed twice")]
    Duplicate(String),
    #[error("model `{0}`: max_concurrency must be at least 1")]
    Concurrency(String),
}

impl Registry {
    pub fn from_toml(text: &str) -> Result<Self, RegistryError> {
        let reg: Registry = toml::from_str(text)?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn load(path: &Path) -> Result<Self, RegistryError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| RegistryError::Io { path: path.display().to_string(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("registry serializes")
    }

    pub fn get(&self, model_id: &str) -> Option<&ModelRecord> {
        self.models.iter().find(|m| m.model_id == model_id)
    }

    fn validate(&self) -> Result<(), RegistryError> {
        let mut seen = std::collections::HashSet::new();
        for m in &self.models {
            if !(0.0..=100.0).contains(&m.mmlu_score) {
                return Err(RegistryError::MmluRange { model_id: m.model_id.clone(), score: m.mmlu_score });
            }
            if !seen.insert(m.model_id.as_str()) {
                return Err(RegistryError::Duplicate(m.model_id.clone()));
            }
            if m.max_concurrency == 0 {
                return Err(RegistryError::Concurrency(m.model_id.clone()));
            }
        }
        Ok(())
    }
}
