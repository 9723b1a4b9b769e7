//! Span-split parsing: recursively pick a split point, then label the two halves.

use super::{ask, label_pair, ParseError, ParseOptions};
use crate::corpus::Document;
use crate::derive::{tree_from_splits, GoldSplit};
use crate::inventory::LabelInventory;
use crate::oracle::Oracle;
use crate::prompt::{render_split_prompt, span_text, split_labels, PromptError, PromptKind};
use crate::trace::{Correction, ParseTrace, TraceEntry};
use crate::tree::{RstTree, Span};

/// Inclusive bounds of the relative split index shown in the prompt.
pub fn relative_index_bounds(span: Span) -> Result<(usize, usize), PromptError> {
    if span.len() < 2 {
        return Err(PromptError::DegenerateSpan(span.len()));
    }
    Ok((0, span.len() - 2))
}

fn split_correction(raw: &str) -> Correction {
    let line = raw.trim_start().lines().next().unwrap_or("").trim();
    let digits = line.strip_prefix(['-', '+']).unwrap_or(line);
    if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) {
        Correction::OutOfRange
    } else {
        Correction::Unparseable
    }
}

/// Parses `doc` top-down, visiting spans in pre-order (left before right).
///
/// Uses an explicit work stack, so document length does not bound recursion.
pub fn parse_top_down(
    doc: &Document,
    oracle: &dyn Oracle,
    inventory: &LabelInventory,
    opts: &ParseOptions,
) -> Result<(RstTree, ParseTrace), ParseError> {
    let edus = doc.edus();
    if edus.is_empty() {
        return Err(ParseError::EmptyDocument);
    }
    let offset = edus[0].index();
    let slice = |s: Span| &edus[s.first - offset..=s.last - offset];

    let mut trace = ParseTrace::default();
    let mut splits = Vec::with_capacity(edus.len() - 1);
    let mut pending = vec![Span::new(offset, offset + edus.len() - 1)];
    while let Some(span) = pending.pop() {
        if span.len() == 1 {
            continue;
        }
        let step = splits.len();
        let state = format!("span={span}");
        let (_, bound) = relative_index_bounds(span)?;
        let k = if bound == 0 && opts.skip_forced {
            trace.push(TraceEntry::forced(step, &state, PromptKind::Split, "0"));
            0
        } else {
            let prompt = render_split_prompt(slice(span), &opts.prompt)?;
            let asked = ask(oracle, PromptKind::Split, prompt, split_labels(span.len()))?;
            let parsed = asked
                .resolved
                .as_deref()
                .and_then(|r| r.parse::<usize>().ok());
            let (k, correction) = match parsed {
                Some(k) if k <= bound => (k, None),
                _ => (0, Some(split_correction(&asked.raw))),
            };
            trace.push(TraceEntry::asked(
                step,
                &state,
                PromptKind::Split,
                asked,
                &k.to_string(),
                correction,
            ));
            k
        };
        let (left, right) = span.split_at(k);
        let (nuclearity, relation) = label_pair(
            oracle,
            inventory,
            opts,
            &span_text(slice(left)),
            &span_text(slice(right)),
            step,
            &state,
            &mut trace,
        )?;
        splits.push(GoldSplit {
            span,
            k,
            nuclearity,
            relation,
        });
        pending.push(right);
        pending.push(left);
    }
    let tree = tree_from_splits(edus, &splits)?;
    Ok((tree, trace))
}
