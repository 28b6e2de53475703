//! Deterministic serialization of nets and markings.

mod dot;
mod json;
mod pnml;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{Marking, Net};

pub use dot::to_dot;
pub use json::{from_json, to_json, JSON_FORMAT, JSON_VERSION};
pub use pnml::to_pnml;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Dot,
    Pnml,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Dot => "dot",
            Format::Pnml => "pnml",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Format::Dot),
            "pnml" => Ok(Format::Pnml),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidParameter(format!(
                "unknown format {s:?}; expected dot, pnml or json"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SerializedNet {
    pub format: Format,
    pub payload: Vec<u8>,
}

pub fn export(net: &Net, m: &Marking, format: Format) -> SerializedNet {
    let text = match format {
        Format::Dot => to_dot(net, m),
        Format::Pnml => to_pnml(net, m),
        Format::Json => to_json(net, m),
    };
    SerializedNet {
        format,
        payload: text.into_bytes(),
    }
}

/// Inverse of the JSON export.
pub fn import_json(payload: &[u8]) -> Result<(Net, Marking)> {
    from_json(payload)
}
