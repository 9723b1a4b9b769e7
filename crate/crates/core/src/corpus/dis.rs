//! Reader and writer for the parenthesized `.dis` treebank format.
//!
//! ```text
//! ( Root (span 1 2)
//!   ( Nucleus (leaf 1) (rel2par span) (text _!Westinghouse Electric Corp. said_!) )
//!   ( Satellite (leaf 2) (rel2par attribution) (text _!it will buy Shaw-Walker Co._!) )
//! )
//! ```

use std::fmt::Write as _;

use super::CorpusError;
use crate::nary::{NaryChild, NaryTree};
use crate::tree::{normalize_whitespace, Edu, Role, Span};

/// Byte decoding used for treebank files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Encoding {
    /// UTF-8 when valid, Latin-1 otherwise.
    #[default]
    Auto,
    Utf8,
    Latin1,
}

impl std::str::FromStr for Encoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(Encoding::Auto),
            "utf-8" | "utf8" => Ok(Encoding::Utf8),
            "latin-1" | "latin1" | "iso-8859-1" => Ok(Encoding::Latin1),
            other => Err(format!("unknown encoding `{other}`")),
        }
    }
}

pub fn decode(bytes: &[u8], encoding: Encoding) -> Result<String, CorpusError> {
    match encoding {
        Encoding::Utf8 => String::from_utf8(bytes.to_vec()).map_err(|e| CorpusError::Syntax {
            line: 0,
            col: e.utf8_error().valid_up_to(),
            msg: "invalid UTF-8".into(),
        }),
        Encoding::Latin1 => Ok(bytes.iter().map(|&b| b as char).collect()),
        Encoding::Auto => match std::str::from_utf8(bytes) {
            Ok(s) => Ok(s.to_string()),
            Err(_) => Ok(bytes.iter().map(|&b| b as char).collect()),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
    Text(String),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src, pos: 0 }
    }

    fn error(&self, at: usize, msg: impl Into<String>) -> CorpusError {
        let before = &self.src[..at.min(self.src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.len() - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
        CorpusError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn next(&mut self) -> Result<Option<(usize, Tok)>, CorpusError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let tok = match c {
            '(' => {
                self.pos += 1;
                Tok::Open
            }
            ')' => {
                self.pos += 1;
                Tok::Close
            }
            _ if rest.starts_with("_!") => {
                let body_start = start + 2;
                let end = find_text_end(&self.src[body_start..])
                    .ok_or_else(|| self.error(start, "unterminated text field"))?;
                self.pos = body_start + end + 2;
                Tok::Text(self.src[body_start..body_start + end].to_string())
            }
            _ => {
                let len = rest
                    .find(|ch: char| ch.is_whitespace() || ch == '(' || ch == ')')
                    .unwrap_or(rest.len());
                self.pos += len;
                Tok::Atom(rest[..len].to_string())
            }
        };
        Ok(Some((start, tok)))
    }

    fn expect_next(&mut self) -> Result<(usize, Tok), CorpusError> {
        let at = self.src.len();
        self.next()?
            .ok_or_else(|| self.error(at, "unexpected end of input"))
    }

    fn peek(&mut self) -> Result<Option<Tok>, CorpusError> {
        let save = self.pos;
        let t = self.next()?.map(|(_, t)| t);
        self.pos = save;
        Ok(t)
    }

    fn peek2(&mut self) -> Result<(Option<Tok>, Option<Tok>), CorpusError> {
        let save = self.pos;
        let a = self.next()?.map(|(_, t)| t);
        let b = self.next()?.map(|(_, t)| t);
        self.pos = save;
        Ok((a, b))
    }
}

/// Text bodies close with `_!` (or `!_` in some distributions) followed by `)`.
fn find_text_end(body: &str) -> Option<usize> {
    let mut from = 0;
    while from < body.len() {
        let rel = body[from..].find(['_', '!'])?;
        let at = from + rel;
        let tail = &body[at..];
        if (tail.starts_with("_!") || tail.starts_with("!_"))
            && tail[2..].trim_start().starts_with(')')
        {
            return Some(at);
        }
        from = at + 1;
    }
    None
}

#[derive(Debug)]
struct RawNode {
    at: usize,
    kind: String,
    span: Option<(usize, usize)>,
    leaf: Option<usize>,
    rel2par: Option<String>,
    text: Option<String>,
    children: Vec<RawNode>,
}

fn is_node_kind(atom: &str) -> bool {
    matches!(atom, "Root" | "Nucleus" | "Satellite")
}

fn parse_usize(lex: &Lexer<'_>, at: usize, tok: Tok) -> Result<usize, CorpusError> {
    match tok {
        Tok::Atom(a) => a
            .parse()
            .map_err(|_| lex.error(at, format!("expected integer, found `{a}`"))),
        other => Err(lex.error(at, format!("expected integer, found {other:?}"))),
    }
}

fn expect_close(lex: &mut Lexer<'_>) -> Result<(), CorpusError> {
    match lex.expect_next()? {
        (_, Tok::Close) => Ok(()),
        (at, t) => Err(lex.error(at, format!("expected `)`, found {t:?}"))),
    }
}

fn parse_node(lex: &mut Lexer<'_>) -> Result<RawNode, CorpusError> {
    let (at, open) = lex.expect_next()?;
    if open != Tok::Open {
        return Err(lex.error(at, "expected `(`"));
    }
    let kind = match lex.expect_next()? {
        (_, Tok::Atom(a)) if is_node_kind(&a) => a,
        (at, t) => {
            return Err(lex.error(at, format!("expected Root/Nucleus/Satellite, found {t:?}")))
        }
    };
    let mut node = RawNode {
        at,
        kind,
        span: None,
        leaf: None,
        rel2par: None,
        text: None,
        children: Vec::new(),
    };
    loop {
        match lex.peek2()? {
            (Some(Tok::Close), _) => {
                lex.next()?;
                return Ok(node);
            }
            (Some(Tok::Open), Some(Tok::Atom(a))) if is_node_kind(&a) => {
                node.children.push(parse_node(lex)?);
            }
            (Some(Tok::Open), Some(Tok::Atom(field))) => {
                lex.next()?;
                lex.expect_next()?;
                match field.as_str() {
                    "span" => {
                        let (a1, t1) = lex.expect_next()?;
                        let (a2, t2) = lex.expect_next()?;
                        node.span = Some((parse_usize(lex, a1, t1)?, parse_usize(lex, a2, t2)?));
                        expect_close(lex)?;
                    }
                    "leaf" => {
                        let (a1, t1) = lex.expect_next()?;
                        node.leaf = Some(parse_usize(lex, a1, t1)?);
                        expect_close(lex)?;
                    }
                    "rel2par" => match lex.expect_next()? {
                        (_, Tok::Atom(r)) => {
                            node.rel2par = Some(r);
                            expect_close(lex)?;
                        }
                        (a, t) => return Err(lex.error(a, format!("bad rel2par value {t:?}"))),
                    },
                    "text" => match lex.expect_next()? {
                        (_, Tok::Text(t)) => {
                            node.text = Some(t);
                            expect_close(lex)?;
                        }
                        (_, Tok::Atom(first)) => {
                            // undelimited text: collect atoms up to the closing paren
                            let mut words = vec![first];
                            loop {
                                match lex.expect_next()? {
                                    (_, Tok::Close) => break,
                                    (_, Tok::Atom(w)) | (_, Tok::Text(w)) => words.push(w),
                                    (a, Tok::Open) => {
                                        return Err(lex.error(a, "unexpected `(` in text field"))
                                    }
                                }
                            }
                            node.text = Some(words.join(" "));
                        }
                        (a, t) => return Err(lex.error(a, format!("bad text value {t:?}"))),
                    },
                    _ => {
                        // unknown field: skip to its closing paren
                        let mut depth = 1;
                        while depth > 0 {
                            match lex.expect_next()? {
                                (_, Tok::Open) => depth += 1,
                                (_, Tok::Close) => depth -= 1,
                                _ => {}
                            }
                        }
                    }
                }
            }
            (Some(t), _) => {
                let (a, _) = lex.expect_next()?;
                return Err(lex.error(a, format!("unexpected token {t:?}")));
            }
            (None, _) => {
                let end = lex.src.len();
                return Err(lex.error(end, "unbalanced parentheses: missing `)`"));
            }
        }
    }
}

/// Removes treebank markup from an EDU text and collapses whitespace.
pub fn clean_edu_text(raw: &str) -> String {
    let stripped = raw.replace("<P>", " ").replace("<p>", " ");
    normalize_whitespace(&stripped)
}

struct Builder<'a> {
    lex: &'a Lexer<'a>,
    edus: Vec<Edu>,
}

impl Builder<'_> {
    fn build(&mut self, raw: &RawNode) -> Result<NaryTree, CorpusError> {
        if let Some(leaf) = raw.leaf {
            if !raw.children.is_empty() {
                return Err(self.lex.error(raw.at, "leaf constituent with children"));
            }
            let expected = self.edus.len() + 1;
            if leaf != expected {
                return Err(CorpusError::InconsistentSpan {
                    declared: Span::new(leaf, leaf),
                    found: Span::new(expected, expected),
                });
            }
            let text = raw.text.as_deref().ok_or_else(|| {
                self.lex
                    .error(raw.at, format!("leaf {leaf} has no text field"))
            })?;
            let edu = Edu::new(leaf, &clean_edu_text(text))
                .map_err(|e| self.lex.error(raw.at, e.to_string()))?;
            self.edus.push(edu.clone());
            return Ok(NaryTree::Leaf(edu));
        }
        let (first, last) = raw.span.ok_or_else(|| {
            self.lex
                .error(raw.at, "constituent has neither span nor leaf")
        })?;
        if raw.children.len() < 2 {
            return Err(self.lex.error(
                raw.at,
                format!("span ({first},{last}) needs at least two children"),
            ));
        }
        let mut children = Vec::with_capacity(raw.children.len());
        for c in &raw.children {
            let role = match c.kind.as_str() {
                "Nucleus" => Role::Nucleus,
                "Satellite" => Role::Satellite,
                _ => return Err(self.lex.error(c.at, "Root nested inside a tree")),
            };
            let rel2par = c
                .rel2par
                .clone()
                .ok_or_else(|| self.lex.error(c.at, "constituent has no rel2par field"))?;
            children.push(NaryChild::new(self.build(c)?, role, rel2par));
        }
        let node = NaryTree::Node(children);
        let found = node.span();
        let declared = Span::new(first, last.max(first));
        if found != declared || first > last {
            return Err(CorpusError::InconsistentSpan { declared, found });
        }
        Ok(node)
    }
}

/// Parses one `.dis` record into its n-ary tree and EDUs in leaf order.
pub fn read_dis(src: &str) -> Result<(NaryTree, Vec<Edu>), CorpusError> {
    let mut lex = Lexer::new(src);
    let raw = parse_node(&mut lex)?;
    if raw.kind != "Root" {
        return Err(lex.error(raw.at, "record must start with a Root constituent"));
    }
    if let Some(t) = lex.peek()? {
        let at = lex.pos;
        return Err(lex.error(at, format!("trailing input after record: {t:?}")));
    }
    let mut builder = Builder {
        lex: &lex,
        edus: Vec::new(),
    };
    let tree = builder.build(&raw)?;
    Ok((tree, builder.edus))
}

/// Serializes an n-ary tree as a `.dis` record with two-space indentation.
pub fn write_dis(tree: &NaryTree) -> String {
    let mut out = String::new();
    write_constituent(&mut out, tree, "Root", None, 0);
    out
}

fn write_constituent(
    out: &mut String,
    tree: &NaryTree,
    kind: &str,
    rel2par: Option<&str>,
    depth: usize,
) {
    let indent = "  ".repeat(depth);
    let rel = rel2par
        .map(|r| format!(" (rel2par {r})"))
        .unwrap_or_default();
    match tree {
        NaryTree::Leaf(e) => {
            let _ = writeln!(
                out,
                "{indent}( {kind} (leaf {}){rel} (text _!{}_!) )",
                e.index(),
                e.text()
            );
        }
        NaryTree::Node(children) => {
            let span = tree.span();
            let _ = writeln!(
                out,
                "{indent}( {kind} (span {} {}){rel}",
                span.first, span.last
            );
            for c in children {
                let kind = match c.role {
                    Role::Nucleus => "Nucleus",
                    Role::Satellite => "Satellite",
                };
                write_constituent(out, &c.tree, kind, Some(&c.rel2par), depth + 1);
            }
            let _ = writeln!(out, "{indent})");
        }
    }
}
