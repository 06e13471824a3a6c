//! Heuristic string typing.

mod api;
mod infer;
mod names;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use api::{ApiEntry, InputOrigin, KnownApiTable, LoopSemantics, TableError};
pub use infer::{
    expr_verdict, hint_verdict, infer_string_vars, infer_types, CallTarget, Evidence, ReceiverClass, RegexTag,
    StringSeed, TypeEnv, TypeInfo,
};
pub use names::ImportMap;

/// Flat lattice of string-ness verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeVerdict {
    String,
    StringCollection,
    NotString,
    Unknown,
}

impl TypeVerdict {
    pub fn is_stringy(self) -> bool {
        matches!(self, TypeVerdict::String | TypeVerdict::StringCollection)
    }

    pub fn is_known(self) -> bool {
        self != TypeVerdict::Unknown
    }

    pub fn as_str(self) -> &'static str {
        match self {
            TypeVerdict::String => "string",
            TypeVerdict::StringCollection => "string-collection",
            TypeVerdict::NotString => "not-string",
            TypeVerdict::Unknown => "unknown",
        }
    }
}

impl fmt::Display for TypeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TypeVerdict {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['_', ' '], "-").as_str() {
            "string" | "str" => Ok(TypeVerdict::String),
            "string-collection" | "stringcollection" => Ok(TypeVerdict::StringCollection),
            "not-string" | "notstring" => Ok(TypeVerdict::NotString),
            "unknown" => Ok(TypeVerdict::Unknown),
            other => Err(format!("unknown verdict `{other}`")),
        }
    }
}
