//! Versioned JSON report envelope emitted by every CLI command.

use serde::Serialize;

use crate::Result;

/// Bump when any report payload changes shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scene: Option<String>,
    pub report: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, seed: u64, scene: Option<String>, payload: impl Serialize) -> Result<Report> {
        Ok(Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            seed,
            scene,
            report: serde_json::to_value(payload)?,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut out = serde_json::to_string_pretty(self)?;
        out.push('\n');
        Ok(out)
    }
}
