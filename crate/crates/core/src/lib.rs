//! RST discourse parsing driven by text-completion oracles.
//!
//! Documents are parsed either bottom-up (shift-reduce) or top-down (span
//! splitting). Each decision is posed as a prompt to an [`oracle::Oracle`]:
//! a fine-tuned model behind an HTTP endpoint, a replay of gold decisions, or
//! a scripted stand-in. Answers outside the valid label set fall back to
//! fixed defaults, so every parse yields a well-formed tree.
//!
//! The crate also reads treebank files, exports fine-tuning data, scores
//! predictions with Standard-Parseval, and carries a reference
//! implementation of biaffine span scoring.

pub mod baseline;
pub mod corpus;
pub mod derive;
pub mod engine;
pub mod eval;
pub mod export;
pub mod inventory;
pub mod nary;
pub mod oracle;
pub mod prompt;
pub mod synth;
pub mod trace;
pub mod tree;
