//! Per-decision parse traces, serialized as JSON lines.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::engine::Asked;
use crate::prompt::PromptKind;

/// Why a decision differs from the oracle's answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Correction {
    /// The answer matched no valid label.
    Unparseable,
    /// An integer split point outside the span.
    OutOfRange,
    /// A valid label naming an action that is not legal in the state.
    Illegal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEntry {
    /// Action index (bottom-up) or split index in pre-order (top-down).
    pub step: usize,
    pub state: String,
    pub kind: PromptKind,
    /// First 16 hex digits of the prompt's SHA-256; absent for forced moves.
    pub prompt_id: Option<String>,
    pub prompt: Option<String>,
    pub raw: Option<String>,
    pub resolved: Option<String>,
    /// Label actually applied.
    pub decision: String,
    pub corrected: bool,
    pub correction: Option<Correction>,
    /// Taken without consulting the oracle.
    pub forced: bool,
}

pub fn prompt_id(prompt: &str) -> String {
    let digest = Sha256::digest(prompt.as_bytes());
    hex::encode(&digest[..8])
}

impl TraceEntry {
    pub fn forced(step: usize, state: &str, kind: PromptKind, decision: &str) -> Self {
        TraceEntry {
            step,
            state: state.to_string(),
            kind,
            prompt_id: None,
            prompt: None,
            raw: None,
            resolved: None,
            decision: decision.to_string(),
            corrected: false,
            correction: None,
            forced: true,
        }
    }

    pub(crate) fn asked(
        step: usize,
        state: &str,
        kind: PromptKind,
        asked: Asked,
        decision: &str,
        correction: Option<Correction>,
    ) -> Self {
        TraceEntry {
            step,
            state: state.to_string(),
            kind,
            prompt_id: Some(prompt_id(&asked.prompt)),
            prompt: Some(asked.prompt),
            raw: Some(asked.raw),
            resolved: asked.resolved,
            decision: decision.to_string(),
            corrected: correction.is_some(),
            correction,
            forced: false,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseTrace {
    entries: Vec<TraceEntry>,
}

impl ParseTrace {
    pub fn new(entries: Vec<TraceEntry>) -> Self {
        ParseTrace { entries }
    }

    pub fn push(&mut self, entry: TraceEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[TraceEntry] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<TraceEntry> {
        self.entries
    }

    /// Decisions of `kind`, forced or not.
    pub fn count(&self, kind: PromptKind) -> usize {
        self.entries.iter().filter(|e| e.kind == kind).count()
    }

    /// Decisions for which the oracle was consulted.
    pub fn queried(&self) -> usize {
        self.entries.iter().filter(|e| !e.forced).count()
    }

    pub fn queried_kind(&self, kind: PromptKind) -> usize {
        self.entries
            .iter()
            .filter(|e| !e.forced && e.kind == kind)
            .count()
    }

    pub fn corrected(&self) -> usize {
        self.entries.iter().filter(|e| e.corrected).count()
    }

    pub fn corrected_kind(&self, kind: PromptKind) -> usize {
        self.entries
            .iter()
            .filter(|e| e.corrected && e.kind == kind)
            .count()
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for e in &self.entries {
            serde_json::to_writer(&mut out, e)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_jsonl(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> std::io::Result<Self> {
        let mut entries = Vec::new();
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            entries.push(serde_json::from_str(&line)?);
        }
        Ok(ParseTrace { entries })
    }
}
