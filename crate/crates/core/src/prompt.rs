//! Prompt templates for the four parsing subtasks.
//!
//! Lines are joined with a single `\n`, there is no trailing newline after the
//! cue line, and option lists are separated by `", "`. Golden files under
//! `tests/golden/` pin the exact bytes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::bottom_up::ParserState;
use crate::inventory::LabelInventory;
use crate::tree::{join_edus, Edu, Nuclearity};

/// Rendered in a stack or queue slot that holds nothing.
pub const EMPTY_SLOT: &str = "None";
/// Inserted where an over-long span text has been elided.
pub const ELISION_MARKER: &str = " [...] ";

pub const ACTION_LABELS: [&str; 2] = ["shift", "reduce"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PromptError {
    #[error("split prompt needs at least two EDUs, got {0}")]
    DegenerateSpan(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptKind {
    Action,
    Nuclearity,
    Relation,
    Split,
}

impl PromptKind {
    pub const ALL: [PromptKind; 4] = [
        PromptKind::Action,
        PromptKind::Nuclearity,
        PromptKind::Relation,
        PromptKind::Split,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PromptKind::Action => "action",
            PromptKind::Nuclearity => "nuclearity",
            PromptKind::Relation => "relation",
            PromptKind::Split => "split",
        }
    }
}

impl fmt::Display for PromptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PromptKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PromptKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown prompt kind `{s}`"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptConfig {
    /// Span texts longer than this many characters are center-elided.
    pub max_span_chars: Option<usize>,
}

impl PromptConfig {
    pub fn fit(&self, text: &str) -> String {
        match self.max_span_chars {
            Some(budget) => elide_middle(text, budget),
            None => text.to_string(),
        }
    }
}

/// Shortens `text` to at most `budget` characters, keeping both edges.
pub fn elide_middle(text: &str, budget: usize) -> String {
    let len = text.chars().count();
    if len <= budget {
        return text.to_string();
    }
    let marker = ELISION_MARKER.chars().count();
    let keep = budget.saturating_sub(marker).max(2);
    let head = keep.div_ceil(2);
    let tail = keep - head;
    let start: String = text.chars().take(head).collect();
    let end: String = text.chars().skip(len - tail).collect();
    format!("{}{}{}", start.trim_end(), ELISION_MARKER, end.trim_start())
}

fn slot(text: Option<&str>, cfg: &PromptConfig) -> String {
    text.map(|t| cfg.fit(t))
        .unwrap_or_else(|| EMPTY_SLOT.to_string())
}

/// Action prompt from the raw slot texts (second stack item, top of stack, queue front).
pub fn render_action_slots(
    stack2: Option<&str>,
    stack1: Option<&str>,
    queue1: Option<&str>,
    cfg: &PromptConfig,
) -> String {
    format!(
        "Stack2: {}\nStack1: {}\nQueue1: {}\nAction (shift or reduce):",
        slot(stack2, cfg),
        slot(stack1, cfg),
        slot(queue1, cfg)
    )
}

pub fn render_action_prompt(state: &ParserState, cfg: &PromptConfig) -> String {
    let stack2 = state.stack2().map(|t| t.text());
    let stack1 = state.stack1().map(|t| t.text());
    let queue1 = state.queue1().map(|e| e.text());
    render_action_slots(stack2.as_deref(), stack1.as_deref(), queue1, cfg)
}

fn nuclearity_options() -> String {
    Nuclearity::ALL.map(Nuclearity::as_str).join(", ")
}

pub fn render_nuclearity_prompt(span2: &str, span1: &str, cfg: &PromptConfig) -> String {
    format!(
        "Span2: {}\nSpan1: {}\nNucleus label ({}):",
        cfg.fit(span2),
        cfg.fit(span1),
        nuclearity_options()
    )
}

pub fn render_relation_prompt(
    span2: &str,
    span1: &str,
    predicted: Nuclearity,
    inventory: &LabelInventory,
    cfg: &PromptConfig,
) -> String {
    let options: Vec<&str> = inventory.relations().iter().map(|r| r.as_str()).collect();
    format!(
        "Span2: {}\nSpan1: {}\nNucleus label: {}\nRelation label ({}):",
        cfg.fit(span2),
        cfg.fit(span1),
        predicted.as_str(),
        options.join(", ")
    )
}

/// Split prompt for a span; EDUs are renumbered from 0 regardless of their document position.
pub fn render_split_prompt(edus: &[Edu], cfg: &PromptConfig) -> Result<String, PromptError> {
    if edus.len() < 2 {
        return Err(PromptError::DegenerateSpan(edus.len()));
    }
    let mut out = String::from("Input:");
    for (i, edu) in edus.iter().enumerate() {
        out.push('\n');
        out.push_str(&i.to_string());
        out.push_str(": ");
        out.push_str(&cfg.fit(edu.text()));
    }
    out.push_str(&format!("\nSplit point (0 - {}):", edus.len() - 2));
    Ok(out)
}

pub fn nuclearity_labels() -> Vec<String> {
    Nuclearity::ALL
        .iter()
        .map(|n| n.as_str().to_string())
        .collect()
}

pub fn action_labels() -> Vec<String> {
    ACTION_LABELS.iter().map(|s| s.to_string()).collect()
}

pub fn relation_labels(inventory: &LabelInventory) -> Vec<String> {
    inventory
        .relations()
        .iter()
        .map(|r| r.to_string())
        .collect()
}

/// Valid split answers for a span of `len` EDUs: `"0"..="len-2"`.
pub fn split_labels(len: usize) -> Vec<String> {
    (0..len.saturating_sub(1)).map(|k| k.to_string()).collect()
}

/// Text of a contiguous EDU slice, as used in prompts.
pub fn span_text(edus: &[Edu]) -> String {
    join_edus(edus)
}
