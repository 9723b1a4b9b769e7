//! Canonical bracket format for binary trees.
//!
//! `(leaf 3)` for a leaf and `(NS Elaboration <left> <right>)` for an internal
//! node. Leaves carry indices only; EDU text comes from the owning document.

use super::CorpusError;
use crate::tree::{Edu, Nuclearity, Relation, RstTree};

pub fn write_tree(tree: &RstTree) -> String {
    let mut out = String::new();
    write_into(&mut out, tree);
    out
}

fn write_into(out: &mut String, tree: &RstTree) {
    match tree {
        RstTree::Leaf(e) => {
            out.push_str("(leaf ");
            out.push_str(&e.index().to_string());
            out.push(')');
        }
        RstTree::Node(n) => {
            out.push('(');
            out.push_str(n.nuclearity().short());
            out.push(' ');
            out.push_str(n.relation().as_str());
            out.push(' ');
            write_into(out, n.left());
            out.push(' ');
            write_into(out, n.right());
            out.push(')');
        }
    }
}

struct Reader<'a> {
    src: &'a str,
    pos: usize,
    edus: &'a [Edu],
}

impl Reader<'_> {
    fn err(&self, msg: impl Into<String>) -> CorpusError {
        CorpusError::Syntax {
            line: 1,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, c: char) -> Result<(), CorpusError> {
        if self.src[self.pos..].starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else if self.pos >= self.src.len() {
            Err(self.err(format!("unexpected end of input, expected `{c}`")))
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<&str, CorpusError> {
        let rest = &self.src[self.pos..];
        let len = rest.find([' ', '(', ')']).unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a word"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn tree(&mut self) -> Result<RstTree, CorpusError> {
        self.eat('(')?;
        let head = self.word()?.to_string();
        self.eat(' ')?;
        let tree = if head == "leaf" {
            let word = self.word()?;
            let idx: usize = word.parse().map_err(|_| self.err("bad leaf index"))?;
            let edu = idx
                .checked_sub(1)
                .and_then(|i| self.edus.get(i))
                .ok_or_else(|| self.err(format!("leaf {idx} not in document")))?;
            RstTree::leaf(edu.clone())
        } else {
            let nuc: Nuclearity = head.parse().map_err(|_| self.err("bad nuclearity"))?;
            let rel = Relation::new(self.word()?);
            self.eat(' ')?;
            let left = self.tree()?;
            self.eat(' ')?;
            let right = self.tree()?;
            RstTree::node(left, right, nuc, rel).map_err(|e| self.err(e.to_string()))?
        };
        self.eat(')')?;
        Ok(tree)
    }
}

/// Parses a tree written by [`write_tree`], attaching EDUs from `edus` (1-based).
pub fn read_tree(text: &str, edus: &[Edu]) -> Result<RstTree, CorpusError> {
    let src = text.trim_end_matches(['\n', '\r']);
    let mut r = Reader { src, pos: 0, edus };
    let tree = r.tree()?;
    if r.pos != src.len() {
        return Err(r.err("trailing input"));
    }
    Ok(tree)
}
