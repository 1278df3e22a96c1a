use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ReturnsModelParams, SpreadModelParams, VixModelParams};
use crate::error::{Error, Result};
use crate::ingest::MonthRange;

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model_kind", content = "params", rename_all = "snake_case")]
pub enum ModelParams {
    Vix(VixModelParams),
    Spread(SpreadModelParams),
    Returns(ReturnsModelParams),
}

impl ModelParams {
    pub fn window(&self) -> MonthRange {
        match self {
            ModelParams::Vix(p) => p.window,
            ModelParams::Spread(p) => p.window,
            ModelParams::Returns(p) => p.window,
        }
    }
}

/// On-disk model: `{schema_version, model_kind, params, window, series_names, fitted_at}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub model: ModelParams,
    pub window: MonthRange,
    pub series_names: Vec<String>,
    #[serde(default)]
    pub fitted_at: Option<String>,
}

impl ModelFile {
    pub fn new(model: ModelParams, series_names: Vec<String>) -> Self {
        Self {
            schema_version: MODEL_SCHEMA_VERSION,
            window: model.window(),
            model,
            series_names,
            fitted_at: None,
        }
    }
}

pub fn save_model(file: &ModelFile, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

/// Loads a model file, checking the schema version before decoding the payload.
pub fn load_model(path: &Path) -> Result<ModelFile> {
    let text = std::fs::read_to_string(path)?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let found = raw
        .get("schema_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| Error::Json(serde::de::Error::missing_field("schema_version")))?;
    if found != MODEL_SCHEMA_VERSION as u64 {
        return Err(Error::SchemaVersion { found: found as u32, expected: MODEL_SCHEMA_VERSION });
    }
    // Decode from text rather than `raw` so floats keep their exact round trip.
    Ok(serde_json::from_str(&text)?)
}
