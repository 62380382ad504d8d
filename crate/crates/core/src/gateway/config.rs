use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ApiStyle, GatewayError};

/// `[gateway]` section of the config file. Environment variables
/// `STRATEGOS_API_URL`, `STRATEGOS_API_KEY` and `STRATEGOS_MODEL` override it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GatewayConfig {
    pub url: String,
    pub api_key: Option<String>,
    pub model: String,
    pub api_style: ApiStyle,
    pub timeout_secs: u64,
}

impl Default for GatewayConfig {
    fn default() -> Self {
        Self {
            url: "http://localhost:8000/v1/completions".into(),
            api_key: None,
            model: "default".into(),
            api_style: ApiStyle::Completions,
            timeout_secs: 120,
        }
    }
}

#[derive(Deserialize)]
struct ConfigFile {
    #[serde(default)]
    gateway: GatewayConfig,
}

impl GatewayConfig {
    pub fn from_toml(text: &str) -> Result<Self, GatewayError> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| GatewayError::InvalidRequest(e.to_string()))?;
        Ok(file.gateway)
    }

    /// Loads the file if given, then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self, GatewayError> {
        let base = match path {
            Some(p) => Self::from_toml(&std::fs::read_to_string(p)?)?,
            None => Self::default(),
        };
        Ok(base.with_overrides(|k| std::env::var(k).ok()))
    }

    pub fn with_overrides(mut self, env: impl Fn(&str) -> Option<String>) -> Self {
        if let Some(v) = env("STRATEGOS_API_URL") {
            self.url = v;
        }
        if let Some(v) = env("STRATEGOS_API_KEY") {
            self.api_key = Some(v);
        }
        if let Some(v) = env("STRATEGOS_MODEL") {
            self.model = v;
        }
        self
    }
}
