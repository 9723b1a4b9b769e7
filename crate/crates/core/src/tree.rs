//! RST tree data model: EDUs, nuclearity, relation labels and binary trees.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("EDU index must be >= 1")]
    ZeroIndex,
    #[error("EDU {0} has empty text after normalization")]
    EmptyEdu(usize),
    #[error("unknown nuclearity pattern `{0}`")]
    UnknownNuclearity(String),
    #[error("spans ({0},{1}) and ({2},{3}) are not adjacent")]
    NotAdjacent(usize, usize, usize, usize),
    #[error("span ({0},{1}) outside tree span ({2},{3})")]
    SpanOutOfRange(usize, usize, usize, usize),
    #[error("EDU indices are not consecutive: expected {expected}, found {found}")]
    NonConsecutive { expected: usize, found: usize },
}

/// Collapses all runs of whitespace (including newlines) into single spaces and trims.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// An elementary discourse unit with its 1-based document position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edu {
    index: usize,
    text: String,
}

impl Edu {
    pub fn new(index: usize, text: &str) -> Result<Self, TreeError> {
        if index == 0 {
            return Err(TreeError::ZeroIndex);
        }
        let text = normalize_whitespace(text);
        if text.is_empty() {
            return Err(TreeError::EmptyEdu(index));
        }
        Ok(Edu { index, text })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn text(&self) -> &str {
        &self.text
    }
}

/// Checks that `edus` are numbered 1, 2, ... without gaps.
pub fn check_consecutive(edus: &[Edu]) -> Result<(), TreeError> {
    for (pos, edu) in edus.iter().enumerate() {
        if edu.index != pos + 1 {
            return Err(TreeError::NonConsecutive {
                expected: pos + 1,
                found: edu.index,
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Nuclearity {
    NucleusNucleus,
    NucleusSatellite,
    SatelliteNucleus,
}

impl Nuclearity {
    pub const ALL: [Nuclearity; 3] = [
        Nuclearity::NucleusNucleus,
        Nuclearity::NucleusSatellite,
        Nuclearity::SatelliteNucleus,
    ];

    /// Canonical label string used in prompts and completions.
    pub fn as_str(self) -> &'static str {
        match self {
            Nuclearity::NucleusNucleus => "nucleus-nucleus",
            Nuclearity::NucleusSatellite => "nucleus-satellite",
            Nuclearity::SatelliteNucleus => "satellite-nucleus",
        }
    }

    /// Two-letter abbreviation used by the bracket format.
    pub fn short(self) -> &'static str {
        match self {
            Nuclearity::NucleusNucleus => "NN",
            Nuclearity::NucleusSatellite => "NS",
            Nuclearity::SatelliteNucleus => "SN",
        }
    }

    pub fn from_roles(left: Role, right: Role) -> Option<Self> {
        match (left, right) {
            (Role::Nucleus, Role::Nucleus) => Some(Nuclearity::NucleusNucleus),
            (Role::Nucleus, Role::Satellite) => Some(Nuclearity::NucleusSatellite),
            (Role::Satellite, Role::Nucleus) => Some(Nuclearity::SatelliteNucleus),
            (Role::Satellite, Role::Satellite) => None,
        }
    }
}

impl fmt::Display for Nuclearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Nuclearity {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "nucleus-nucleus" | "NN" => Ok(Nuclearity::NucleusNucleus),
            "nucleus-satellite" | "NS" => Ok(Nuclearity::NucleusSatellite),
            "satellite-nucleus" | "SN" => Ok(Nuclearity::SatelliteNucleus),
            other => Err(TreeError::UnknownNuclearity(other.to_string())),
        }
    }
}

/// Role of a constituent relative to its parent in an n-ary treebank tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Nucleus,
    Satellite,
}

/// A canonical relation name. Membership in an inventory is checked where trees are built.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Relation(String);

impl Relation {
    pub fn new(name: impl Into<String>) -> Self {
        Relation(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Inclusive EDU span `(first, last)`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub first: usize,
    pub last: usize,
}

impl Span {
    pub fn new(first: usize, last: usize) -> Self {
        debug_assert!(first <= last);
        Span { first, last }
    }

    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: Span) -> bool {
        self.first <= other.first && other.last <= self.last
    }

    /// Splits after relative position `k` (0-based): left is `first..=first+k`.
    pub fn split_at(&self, k: usize) -> (Span, Span) {
        let mid = self.first + k;
        (Span::new(self.first, mid), Span::new(mid + 1, self.last))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.first, self.last)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Node {
    left: RstTree,
    right: RstTree,
    nuclearity: Nuclearity,
    relation: Relation,
    span: Span,
}

impl Node {
    pub fn left(&self) -> &RstTree {
        &self.left
    }

    pub fn right(&self) -> &RstTree {
        &self.right
    }

    pub fn nuclearity(&self) -> Nuclearity {
        self.nuclearity
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }
}

/// Binary RST constituency tree over EDUs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RstTree {
    Leaf(Edu),
    Node(Box<Node>),
}

impl RstTree {
    pub fn leaf(edu: Edu) -> Self {
        RstTree::Leaf(edu)
    }

    /// Joins two adjacent subtrees. Fails unless `right` starts right after `left` ends.
    pub fn node(
        left: RstTree,
        right: RstTree,
        nuclearity: Nuclearity,
        relation: Relation,
    ) -> Result<Self, TreeError> {
        let (l, r) = (left.span(), right.span());
        if l.last + 1 != r.first {
            return Err(TreeError::NotAdjacent(l.first, l.last, r.first, r.last));
        }
        Ok(RstTree::Node(Box::new(Node {
            span: Span::new(l.first, r.last),
            left,
            right,
            nuclearity,
            relation,
        })))
    }

    pub fn span(&self) -> Span {
        match self {
            RstTree::Leaf(edu) => Span::new(edu.index, edu.index),
            RstTree::Node(node) => node.span,
        }
    }

    pub fn as_node(&self) -> Option<&Node> {
        match self {
            RstTree::Node(node) => Some(node),
            RstTree::Leaf(_) => None,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RstTree::Leaf(_))
    }

    /// Leaves from left to right.
    pub fn leaves(&self) -> Vec<&Edu> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                RstTree::Leaf(edu) => out.push(edu),
                RstTree::Node(n) => {
                    stack.push(&n.right);
                    stack.push(&n.left);
                }
            }
        }
        out
    }

    /// Internal nodes in pre-order (parent, then left subtree, then right subtree).
    pub fn preorder_nodes(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let RstTree::Node(n) = t {
                out.push(n.as_ref());
                stack.push(&n.right);
                stack.push(&n.left);
            }
        }
        out
    }

    /// Internal nodes in post-order (left subtree, right subtree, parent).
    pub fn postorder_nodes(&self) -> Vec<&Node> {
        // reversed (parent, right, left) order is post-order
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let RstTree::Node(n) = t {
                out.push(n.as_ref());
                stack.push(&n.left);
                stack.push(&n.right);
            }
        }
        out.reverse();
        out
    }

    pub fn internal_count(&self) -> usize {
        self.preorder_nodes().len()
    }

    pub fn depth(&self) -> usize {
        let mut best = 0;
        let mut stack = vec![(self, 0usize)];
        while let Some((t, d)) = stack.pop() {
            best = best.max(d);
            if let RstTree::Node(n) = t {
                stack.push((&n.left, d + 1));
                stack.push((&n.right, d + 1));
            }
        }
        best
    }

    /// Text of EDUs `span.first..=span.last`, single-space joined.
    pub fn span_text(&self, span: Span) -> Result<String, TreeError> {
        let whole = self.span();
        if span.first > span.last || !whole.contains(span) {
            return Err(TreeError::SpanOutOfRange(
                span.first,
                span.last,
                whole.first,
                whole.last,
            ));
        }
        let leaves = self.leaves();
        let offset = whole.first;
        Ok(join_edus(&leaves[span.first - offset..=span.last - offset]))
    }

    /// Text covered by the whole tree.
    pub fn text(&self) -> String {
        join_edus(&self.leaves())
    }

    /// Checks the structural invariants: consecutive leaves, adjacency, n-1 internal nodes.
    pub fn validate(&self) -> Result<(), TreeError> {
        let leaves = self.leaves();
        let first = self.span().first;
        for (pos, edu) in leaves.iter().enumerate() {
            if edu.index != first + pos {
                return Err(TreeError::NonConsecutive {
                    expected: first + pos,
                    found: edu.index,
                });
            }
        }
        for node in self.preorder_nodes() {
            let (l, r) = (node.left.span(), node.right.span());
            if l.last + 1 != r.first || node.span != Span::new(l.first, r.last) {
                return Err(TreeError::NotAdjacent(l.first, l.last, r.first, r.last));
            }
        }
        Ok(())
    }
}

pub(crate) fn join_edus<E: std::borrow::Borrow<Edu>>(edus: &[E]) -> String {
    let mut out = String::new();
    for (i, edu) in edus.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(edu.borrow().text());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edu(i: usize, t: &str) -> Edu {
        Edu::new(i, t).unwrap()
    }

    fn rel(s: &str) -> Relation {
        Relation::new(s)
    }

    #[test]
    fn edu_text_is_normalized() {
        let e = edu(1, "  Terms   weren't\n disclosed. ");
        assert_eq!(e.text(), "Terms weren't disclosed.");
        assert_eq!(Edu::new(2, " \n "), Err(TreeError::EmptyEdu(2)));
        assert_eq!(Edu::new(0, "x"), Err(TreeError::ZeroIndex));
    }

    #[test]
    fn nuclearity_parsing_is_closed() {
        for n in Nuclearity::ALL {
            assert_eq!(n.as_str().parse::<Nuclearity>().unwrap(), n);
            assert_eq!(n.short().parse::<Nuclearity>().unwrap(), n);
        }
        assert!("satellite-satellite".parse::<Nuclearity>().is_err());
    }

    #[test]
    fn node_requires_adjacency() {
        let err = RstTree::node(
            RstTree::leaf(edu(1, "a")),
            RstTree::leaf(edu(3, "c")),
            Nuclearity::NucleusSatellite,
            rel("Elaboration"),
        );
        assert!(matches!(err, Err(TreeError::NotAdjacent(1, 1, 3, 3))));
    }

    #[test]
    fn span_text_examples() {
        let t = RstTree::node(
            RstTree::node(
                RstTree::leaf(edu(1, "Westinghouse Electric Corp. said")),
                RstTree::leaf(edu(2, "it will buy Shaw-Walker Co.")),
                Nuclearity::SatelliteNucleus,
                rel("Attribution"),
            )
            .unwrap(),
            RstTree::leaf(edu(3, "Terms weren't disclosed.")),
            Nuclearity::NucleusSatellite,
            rel("Attribution"),
        )
        .unwrap();
        assert_eq!(
            t.span_text(Span::new(1, 2)).unwrap(),
            "Westinghouse Electric Corp. said it will buy Shaw-Walker Co."
        );
        assert_eq!(
            t.span_text(Span::new(3, 3)).unwrap(),
            "Terms weren't disclosed."
        );
        assert!(matches!(
            t.span_text(Span::new(2, 4)),
            Err(TreeError::SpanOutOfRange(..))
        ));
        assert_eq!(t.internal_count(), 2);
        assert_eq!(t.depth(), 2);
        t.validate().unwrap();
    }

    #[test]
    fn traversal_orders() {
        // ((1 2) (3 4))
        let l = RstTree::node(
            RstTree::leaf(edu(1, "a")),
            RstTree::leaf(edu(2, "b")),
            Nuclearity::NucleusNucleus,
            rel("Joint"),
        )
        .unwrap();
        let r = RstTree::node(
            RstTree::leaf(edu(3, "c")),
            RstTree::leaf(edu(4, "d")),
            Nuclearity::NucleusNucleus,
            rel("List"),
        )
        .unwrap();
        let t = RstTree::node(l, r, Nuclearity::NucleusSatellite, rel("Elaboration")).unwrap();
        let pre: Vec<Span> = t.preorder_nodes().iter().map(|n| n.span).collect();
        let post: Vec<Span> = t.postorder_nodes().iter().map(|n| n.span).collect();
        assert_eq!(pre, vec![Span::new(1, 4), Span::new(1, 2), Span::new(3, 4)]);
        assert_eq!(
            post,
            vec![Span::new(1, 2), Span::new(3, 4), Span::new(1, 4)]
        );
    }
}
