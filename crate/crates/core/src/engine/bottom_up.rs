//! Shift-reduce parsing over a stack of subtrees and a queue of EDUs.

use std::collections::VecDeque;
use std::fmt;

use super::{ask, label_pair, ParseError, ParseOptions};
use crate::corpus::Document;
use crate::inventory::LabelInventory;
use crate::oracle::Oracle;
use crate::prompt::{action_labels, render_action_prompt, PromptKind};
use crate::trace::{Correction, ParseTrace, TraceEntry};
use crate::tree::{Edu, Nuclearity, Relation, RstTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Shift,
    Reduce,
}

impl ActionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Shift => "shift",
            ActionKind::Reduce => "reduce",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Shift,
    Reduce {
        nuclearity: Nuclearity,
        relation: Relation,
    },
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Shift => ActionKind::Shift,
            Action::Reduce { .. } => ActionKind::Reduce,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Shift => f.write_str("shift"),
            Action::Reduce {
                nuclearity,
                relation,
            } => write!(f, "reduce({}, {})", nuclearity, relation),
        }
    }
}

/// Stack of finished subtrees (last = Stack1) and the EDUs still to shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParserState {
    stack: Vec<RstTree>,
    queue: VecDeque<Edu>,
    step_count: usize,
}

impl ParserState {
    pub fn new(edus: &[Edu]) -> Result<Self, ParseError> {
        if edus.is_empty() {
            return Err(ParseError::EmptyDocument);
        }
        Ok(ParserState {
            stack: Vec::new(),
            queue: edus.iter().cloned().collect(),
            step_count: 0,
        })
    }

    pub fn stack(&self) -> &[RstTree] {
        &self.stack
    }

    pub fn queue(&self) -> impl Iterator<Item = &Edu> {
        self.queue.iter()
    }

    pub fn queue_len(&self) -> usize {
        self.queue.len()
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    /// Top of the stack.
    pub fn stack1(&self) -> Option<&RstTree> {
        self.stack.last()
    }

    /// Second item from the top of the stack.
    pub fn stack2(&self) -> Option<&RstTree> {
        self.stack.len().checked_sub(2).map(|i| &self.stack[i])
    }

    /// Front of the queue.
    pub fn queue1(&self) -> Option<&Edu> {
        self.queue.front()
    }

    pub fn is_terminal(&self) -> bool {
        self.queue.is_empty() && self.stack.len() == 1
    }

    pub fn legal_actions(&self) -> Result<Vec<ActionKind>, ParseError> {
        if self.is_terminal() {
            return Err(ParseError::TerminalState);
        }
        let mut out = Vec::with_capacity(2);
        if !self.queue.is_empty() {
            out.push(ActionKind::Shift);
        }
        if self.stack.len() >= 2 {
            out.push(ActionKind::Reduce);
        }
        Ok(out)
    }

    pub fn apply(mut self, action: Action) -> Result<Self, ParseError> {
        let illegal = |s: &ParserState| ParseError::IllegalAction {
            action: action.to_string(),
            state: s.summary(),
        };
        match &action {
            Action::Shift => {
                let edu = self.queue.pop_front().ok_or_else(|| illegal(&self))?;
                self.stack.push(RstTree::leaf(edu));
            }
            Action::Reduce {
                nuclearity,
                relation,
            } => {
                if self.stack.len() < 2 {
                    return Err(illegal(&self));
                }
                let s0 = self.stack.pop().expect("len checked");
                let s1 = self.stack.pop().expect("len checked");
                self.stack
                    .push(RstTree::node(s1, s0, *nuclearity, relation.clone())?);
            }
        }
        self.step_count += 1;
        Ok(self)
    }

    /// Compact description, e.g. `stack=[(1,2) (3,3)] queue=4..6`.
    pub fn summary(&self) -> String {
        let stack: Vec<String> = self.stack.iter().map(|t| t.span().to_string()).collect();
        let queue = match (self.queue.front(), self.queue.back()) {
            (Some(a), Some(b)) => format!("{}..{}", a.index(), b.index()),
            _ => "empty".to_string(),
        };
        format!("stack=[{}] queue={}", stack.join(" "), queue)
    }
}

pub fn initial_state(doc: &Document) -> Result<ParserState, ParseError> {
    ParserState::new(doc.edus())
}

/// Parses `doc` with shift-reduce actions chosen by `oracle`.
///
/// Always returns a tree over all EDUs; unusable answers fall back to the
/// defaults and are flagged in the trace.
pub fn parse_bottom_up(
    doc: &Document,
    oracle: &dyn Oracle,
    inventory: &LabelInventory,
    opts: &ParseOptions,
) -> Result<(RstTree, ParseTrace), ParseError> {
    let mut state = initial_state(doc)?;
    let mut trace = ParseTrace::default();
    let limit = 4 * doc.len();
    while !state.is_terminal() {
        if state.step_count() >= limit {
            return Err(ParseError::StepLimit(limit));
        }
        let step = state.step_count();
        let summary = state.summary();
        let legal = state.legal_actions()?;
        let kind = if legal.len() == 1 && opts.skip_forced {
            trace.push(TraceEntry::forced(
                step,
                &summary,
                PromptKind::Action,
                legal[0].as_str(),
            ));
            legal[0]
        } else {
            let prompt = render_action_prompt(&state, &opts.prompt);
            let asked = ask(oracle, PromptKind::Action, prompt, action_labels())?;
            let wanted = match asked.resolved.as_deref() {
                Some("shift") => Some(ActionKind::Shift),
                Some("reduce") => Some(ActionKind::Reduce),
                _ => None,
            };
            let (kind, correction) = match wanted {
                Some(k) if legal.contains(&k) => (k, None),
                Some(_) => (legal[0], Some(Correction::Illegal)),
                None if legal.contains(&ActionKind::Shift) => {
                    (ActionKind::Shift, Some(Correction::Unparseable))
                }
                None => (legal[0], Some(Correction::Unparseable)),
            };
            trace.push(TraceEntry::asked(
                step,
                &summary,
                PromptKind::Action,
                asked,
                kind.as_str(),
                correction,
            ));
            kind
        };
        let action = match kind {
            ActionKind::Shift => Action::Shift,
            ActionKind::Reduce => {
                let left = state.stack2().expect("reduce is legal").text();
                let right = state.stack1().expect("reduce is legal").text();
                let (nuclearity, relation) = label_pair(
                    oracle, inventory, opts, &left, &right, step, &summary, &mut trace,
                )?;
                Action::Reduce {
                    nuclearity,
                    relation,
                }
            }
        };
        state = state.apply(action)?;
    }
    let tree = state.stack.pop().expect("terminal state holds one tree");
    Ok((tree, trace))
}
