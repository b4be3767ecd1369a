//! Run manifests. Every artifact embeds the manifest of the run that wrote
//! it, and nothing in a manifest depends on the clock or the machine, so
//! equal manifests give byte-identical outputs.

use ban_core::dynamics::Caps;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const TOOL_VERSION: &str = concat!("ban ", env!("CARGO_PKG_VERSION"));

/// Environment variable that overrides the default enumeration caps.
pub const CAP_ENV: &str = "BAN_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapsRecord {
    pub deterministic: usize,
    pub asynchronous: usize,
    pub elementary: usize,
}

impl From<Caps> for CapsRecord {
    fn from(c: Caps) -> Self {
        Self {
            deterministic: c.deterministic,
            asynchronous: c.asynchronous,
            elementary: c.elementary,
        }
    }
}

impl From<CapsRecord> for Caps {
    fn from(c: CapsRecord) -> Self {
        Caps {
            deterministic: c.deterministic,
            asynchronous: c.asynchronous,
            elementary: c.elementary,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Descriptor or network-spec path.
    pub input: String,
    pub mode: Option<String>,
    pub caps: CapsRecord,
    pub seed: Option<u64>,
    pub outputs: Vec<String>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: &str, input: &str, caps: Caps) -> Self {
        Self {
            command: command.to_string(),
            input: input.to_string(),
            mode: None,
            caps: caps.into(),
            seed: None,
            outputs: Vec::new(),
            version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }

    /// The manifest as a one-line comment with the given marker.
    pub fn comment(&self, marker: &str) -> String {
        format!("{marker} manifest: {}", self.to_json_line())
    }
}

/// `--cap` wins over `BAN_CAP`, which wins over the defaults. Either sets
/// the same cap for every mode.
pub fn resolve_caps(flag: Option<usize>, env: Option<&str>) -> Result<Caps> {
    if let Some(cap) = flag {
        return Ok(Caps::uniform(cap));
    }
    match env {
        Some(v) => v.trim().parse::<usize>().map(Caps::uniform).map_err(|_| {
            CliError::Usage(format!(
                "{CAP_ENV} must be a nonnegative integer, got `{v}`"
            ))
        }),
        None => Ok(Caps::default()),
    }
}
