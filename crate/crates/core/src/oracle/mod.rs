//! Decision oracles: anything that answers a parsing prompt with a label.
//!
//! Engines hand an [`OracleQuery`] (prompt plus its closed option set) to an
//! [`Oracle`] and validate the raw completion with [`resolve_label`].

mod cache;
mod http;
mod replay;
mod scripted;

use std::path::PathBuf;

use thiserror::Error;

pub use cache::{cache_key, CacheStats, CachedOracle};
pub use http::{HttpOracle, HttpOracleConfig, RetryPolicy, API_KEY_ENV};
pub use replay::ReplayOracle;
pub use scripted::{RandomOracle, ScriptedOracle};

use crate::prompt::PromptKind;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle failure after {attempts} attempt(s): {message}")]
    Failure { attempts: u32, message: String },
    #[error("replay exhausted after {0} answers")]
    ReplayExhausted(usize),
    #[error("replay expected a {expected} query at position {position}, got {found}")]
    KindMismatch {
        position: usize,
        expected: PromptKind,
        found: PromptKind,
    },
    #[error("oracle configuration: {0}")]
    Config(String),
    #[error("cache record {path} is corrupt: {message}")]
    StoreCorrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleQuery {
    pub kind: PromptKind,
    pub prompt: String,
    pub valid_labels: Vec<String>,
}

impl OracleQuery {
    pub fn new(kind: PromptKind, prompt: String, valid_labels: Vec<String>) -> Self {
        debug_assert!(!valid_labels.is_empty());
        OracleQuery {
            kind,
            prompt,
            valid_labels,
        }
    }
}

/// A completion provider. Implementations must tolerate concurrent queries.
pub trait Oracle: Send + Sync {
    /// Raw completion text for the query's prompt.
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError>;

    /// Identifies the model and decoding setup; part of the cache key.
    fn fingerprint(&self) -> String;
}

impl<O: Oracle + ?Sized> Oracle for &O {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        (**self).complete(query)
    }

    fn fingerprint(&self) -> String {
        (**self).fingerprint()
    }
}

impl<O: Oracle + ?Sized> Oracle for std::sync::Arc<O> {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        (**self).complete(query)
    }

    fn fingerprint(&self) -> String {
        (**self).fingerprint()
    }
}

impl<O: Oracle + ?Sized> Oracle for Box<O> {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        (**self).complete(query)
    }

    fn fingerprint(&self) -> String {
        (**self).fingerprint()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDecision {
    pub raw: String,
    pub resolved: Option<String>,
    pub corrected: bool,
}

impl OracleDecision {
    pub fn resolve(raw: String, valid_labels: &[String]) -> Self {
        let resolved = resolve_label(&raw, valid_labels).map(str::to_string);
        OracleDecision {
            raw,
            resolved,
            corrected: false,
        }
    }
}

/// Matches the first line of `raw` (trimmed, case-folded) against `valid_labels`.
///
/// Integer labels also accept leading zeros. Returns the canonical label.
pub fn resolve_label<'a>(raw: &str, valid_labels: &'a [String]) -> Option<&'a str> {
    let line = raw.trim_start().lines().next().unwrap_or("").trim();
    if line.is_empty() {
        return None;
    }
    let folded = line.to_lowercase();
    if let Some(hit) = valid_labels.iter().find(|l| l.to_lowercase() == folded) {
        return Some(hit.as_str());
    }
    if line.bytes().all(|b| b.is_ascii_digit()) {
        let trimmed = line.trim_start_matches('0');
        let canonical = if trimmed.is_empty() { "0" } else { trimmed };
        return valid_labels
            .iter()
            .find(|l| l.as_str() == canonical)
            .map(String::as_str);
    }
    None
}
