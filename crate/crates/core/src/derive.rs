//! Gold decision sequences derived from trees, and their reconstruction.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tree::{Edu, Nuclearity, Relation, RstTree, Span, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "lowercase")]
pub enum GoldStep {
    Shift,
    Reduce {
        nuclearity: Nuclearity,
        relation: Relation,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GoldSplit {
    pub span: Span,
    /// Relative split index: the left child ends at `span.first + k`.
    pub k: usize,
    pub nuclearity: Nuclearity,
    pub relation: Relation,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("step {0}: shift with empty queue")]
    ShiftOnEmptyQueue(usize),
    #[error("step {0}: reduce with fewer than two stack items")]
    ReduceUnderflow(usize),
    #[error("sequence ended with {stack} stack items and {queue} queued EDUs")]
    Unfinished { stack: usize, queue: usize },
    #[error("split {k} invalid for span {span}")]
    BadSplit { span: Span, k: usize },
    #[error("no split decision for span {0}")]
    MissingSplit(Span),
    #[error("no EDUs")]
    Empty,
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Post-order action image of `tree`: a Shift per leaf, a Reduce per internal node.
pub fn derive_shift_reduce_sequence(tree: &RstTree) -> Vec<GoldStep> {
    enum Visit<'a> {
        Enter(&'a RstTree),
        Exit(&'a RstTree),
    }
    let mut out = Vec::new();
    let mut stack = vec![Visit::Enter(tree)];
    while let Some(v) = stack.pop() {
        match v {
            Visit::Enter(RstTree::Leaf(_)) => out.push(GoldStep::Shift),
            Visit::Enter(t @ RstTree::Node(n)) => {
                stack.push(Visit::Exit(t));
                stack.push(Visit::Enter(n.right()));
                stack.push(Visit::Enter(n.left()));
            }
            Visit::Exit(t) => {
                let n = t.as_node().expect("exit only pushed for nodes");
                out.push(GoldStep::Reduce {
                    nuclearity: n.nuclearity(),
                    relation: n.relation().clone(),
                });
            }
        }
    }
    out
}

/// Pre-order split decisions of `tree`.
pub fn derive_split_sequence(tree: &RstTree) -> Vec<GoldSplit> {
    tree.preorder_nodes()
        .into_iter()
        .map(|n| {
            let span = Span::new(n.left().span().first, n.right().span().last);
            GoldSplit {
                span,
                k: n.left().span().last - span.first,
                nuclearity: n.nuclearity(),
                relation: n.relation().clone(),
            }
        })
        .collect()
}

/// Replays shift/reduce steps over `edus` and returns the single resulting tree.
pub fn replay_shift_reduce(edus: &[Edu], steps: &[GoldStep]) -> Result<RstTree, ReplayError> {
    let mut queue = edus.iter();
    let mut stack: Vec<RstTree> = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        match step {
            GoldStep::Shift => {
                let edu = queue.next().ok_or(ReplayError::ShiftOnEmptyQueue(i))?;
                stack.push(RstTree::leaf(edu.clone()));
            }
            GoldStep::Reduce {
                nuclearity,
                relation,
            } => {
                if stack.len() < 2 {
                    return Err(ReplayError::ReduceUnderflow(i));
                }
                let right = stack.pop().expect("len checked");
                let left = stack.pop().expect("len checked");
                stack.push(RstTree::node(left, right, *nuclearity, relation.clone())?);
            }
        }
    }
    let rest = queue.len();
    if stack.len() != 1 || rest != 0 {
        return Err(ReplayError::Unfinished {
            stack: stack.len(),
            queue: rest,
        });
    }
    Ok(stack.pop().expect("len checked"))
}

/// Builds the tree described by split decisions over `edus` (any order of decisions).
pub fn tree_from_splits(edus: &[Edu], splits: &[GoldSplit]) -> Result<RstTree, ReplayError> {
    let first = edus.first().ok_or(ReplayError::Empty)?.index();
    let whole = Span::new(first, first + edus.len() - 1);
    let by_span: HashMap<Span, &GoldSplit> = splits.iter().map(|s| (s.span, s)).collect();

    // pre-order walk collecting spans, then build children-first from the reversed list
    let mut order = Vec::new();
    let mut pending = vec![whole];
    while let Some(span) = pending.pop() {
        if span.len() == 1 {
            continue;
        }
        let split = by_span.get(&span).ok_or(ReplayError::MissingSplit(span))?;
        if split.k + 1 >= span.len() {
            return Err(ReplayError::BadSplit { span, k: split.k });
        }
        order.push(*split);
        let (l, r) = span.split_at(split.k);
        pending.push(r);
        pending.push(l);
    }

    let leaf = |i: usize| RstTree::leaf(edus[i - first].clone());
    let mut built: HashMap<Span, RstTree> = HashMap::new();
    for split in order.into_iter().rev() {
        let (l, r) = split.span.split_at(split.k);
        let left = if l.len() == 1 {
            leaf(l.first)
        } else {
            built.remove(&l).expect("children built first")
        };
        let right = if r.len() == 1 {
            leaf(r.first)
        } else {
            built.remove(&r).expect("children built first")
        };
        built.insert(
            split.span,
            RstTree::node(left, right, split.nuclearity, split.relation.clone())?,
        );
    }
    if whole.len() == 1 {
        return Ok(leaf(whole.first));
    }
    Ok(built.remove(&whole).expect("root built"))
}
