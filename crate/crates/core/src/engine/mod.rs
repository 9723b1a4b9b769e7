//! Oracle-driven parsers: shift-reduce ([`bottom_up`]) and span-split ([`top_down`]).
//!
//! Both engines validate every completion against the query's option set and
//! fall back to fixed defaults when it is missing or illegal: Shift (or the
//! only legal action), split point 0, the inventory's default nuclearity and
//! relation. Every fallback is flagged in the trace.

pub mod bottom_up;
pub mod top_down;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::derive::ReplayError;
use crate::inventory::LabelInventory;
use crate::oracle::{resolve_label, Oracle, OracleError, OracleQuery};
use crate::prompt::{
    nuclearity_labels, relation_labels, render_nuclearity_prompt, render_relation_prompt,
    PromptConfig, PromptError, PromptKind,
};
use crate::trace::{Correction, ParseTrace, TraceEntry};
use crate::tree::{Nuclearity, Relation, TreeError};

pub use bottom_up::{parse_bottom_up, Action, ActionKind, ParserState};
pub use top_down::{parse_top_down, relative_index_bounds};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseOptions {
    /// Take forced moves (one legal action, two-EDU spans) without asking the oracle.
    pub skip_forced: bool,
    pub prompt: PromptConfig,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            skip_forced: true,
            prompt: PromptConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("document has no EDUs")]
    EmptyDocument,
    #[error("illegal action {action} in state {state}")]
    IllegalAction { action: String, state: String },
    #[error("parser state is terminal")]
    TerminalState,
    #[error("step limit {0} exceeded")]
    StepLimit(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Prompt(#[from] PromptError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// Parsing strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    BottomUp,
    TopDown,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::BottomUp => "bottom-up",
            Strategy::TopDown => "top-down",
        }
    }

    /// Prompt kinds the strategy issues.
    pub fn kinds(self) -> [PromptKind; 3] {
        match self {
            Strategy::BottomUp => [
                PromptKind::Action,
                PromptKind::Nuclearity,
                PromptKind::Relation,
            ],
            Strategy::TopDown => [
                PromptKind::Split,
                PromptKind::Nuclearity,
                PromptKind::Relation,
            ],
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bottom-up" | "bottomup" | "shift-reduce" => Ok(Strategy::BottomUp),
            "top-down" | "topdown" | "span-split" => Ok(Strategy::TopDown),
            other => Err(format!(
                "unknown strategy `{other}` (bottom-up or top-down)"
            )),
        }
    }
}

/// Parses `doc` with the chosen strategy.
pub fn parse_document(
    doc: &crate::corpus::Document,
    strategy: Strategy,
    oracle: &dyn Oracle,
    inventory: &LabelInventory,
    opts: &ParseOptions,
) -> Result<(crate::tree::RstTree, ParseTrace), ParseError> {
    match strategy {
        Strategy::BottomUp => parse_bottom_up(doc, oracle, inventory, opts),
        Strategy::TopDown => parse_top_down(doc, oracle, inventory, opts),
    }
}

/// One consulted query: the raw answer and its resolution, if any.
pub(crate) struct Asked {
    pub prompt: String,
    pub raw: String,
    pub resolved: Option<String>,
}

pub(crate) fn ask(
    oracle: &dyn Oracle,
    kind: PromptKind,
    prompt: String,
    labels: Vec<String>,
) -> Result<Asked, OracleError> {
    let query = OracleQuery::new(kind, prompt, labels);
    let raw = oracle.complete(&query)?;
    let resolved = resolve_label(&raw, &query.valid_labels).map(str::to_string);
    Ok(Asked {
        prompt: query.prompt,
        raw,
        resolved,
    })
}

/// Asks for the nuclearity and then the relation of a pair of adjacent spans.
#[allow(clippy::too_many_arguments)]
pub(crate) fn label_pair(
    oracle: &dyn Oracle,
    inventory: &LabelInventory,
    opts: &ParseOptions,
    left_text: &str,
    right_text: &str,
    step: usize,
    state: &str,
    trace: &mut ParseTrace,
) -> Result<(Nuclearity, Relation), ParseError> {
    let prompt = render_nuclearity_prompt(left_text, right_text, &opts.prompt);
    let asked = ask(oracle, PromptKind::Nuclearity, prompt, nuclearity_labels())?;
    let nuclearity = match asked.resolved.as_deref().map(str::parse::<Nuclearity>) {
        Some(Ok(n)) => n,
        _ => inventory.default_nuclearity(),
    };
    let corrected = asked.resolved.is_none();
    trace.push(TraceEntry::asked(
        step,
        state,
        PromptKind::Nuclearity,
        asked,
        nuclearity.as_str(),
        corrected.then_some(Correction::Unparseable),
    ));

    let prompt = render_relation_prompt(left_text, right_text, nuclearity, inventory, &opts.prompt);
    let asked = ask(
        oracle,
        PromptKind::Relation,
        prompt,
        relation_labels(inventory),
    )?;
    let relation = match asked.resolved.as_deref().and_then(|r| inventory.find(r)) {
        Some(r) => r.clone(),
        None => inventory.default_relation().clone(),
    };
    let corrected = asked.resolved.is_none();
    trace.push(TraceEntry::asked(
        step,
        state,
        PromptKind::Relation,
        asked,
        relation.as_str(),
        corrected.then_some(Correction::Unparseable),
    ));
    Ok((nuclearity, relation))
}
