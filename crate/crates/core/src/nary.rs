//! N-ary treebank trees and their right-heavy binarization.

use thiserror::Error;

use crate::inventory::LabelInventory;
use crate::tree::{Edu, Nuclearity, Relation, Role, RstTree, Span};

/// `rel2par` value carried by nuclei of mono-nuclear relations.
pub const SPAN_REL: &str = "span";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BinarizeError {
    #[error("relation `{0}` is not in the label inventory")]
    UnmappableRelation(String),
    #[error("malformed tree at span {span}: {msg}")]
    MalformedTree { span: Span, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaryChild {
    pub tree: NaryTree,
    pub role: Role,
    pub rel2par: String,
}

impl NaryChild {
    pub fn new(tree: NaryTree, role: Role, rel2par: impl Into<String>) -> Self {
        NaryChild {
            tree,
            role,
            rel2par: rel2par.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NaryTree {
    Leaf(Edu),
    Node(Vec<NaryChild>),
}

impl NaryTree {
    pub fn span(&self) -> Span {
        match self {
            NaryTree::Leaf(e) => Span::new(e.index(), e.index()),
            NaryTree::Node(children) => {
                let first = children.first().map(|c| c.tree.span().first).unwrap_or(0);
                let last = children.last().map(|c| c.tree.span().last).unwrap_or(0);
                Span::new(first, last.max(first))
            }
        }
    }

    pub fn leaves(&self) -> Vec<&Edu> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            match t {
                NaryTree::Leaf(e) => out.push(e),
                NaryTree::Node(children) => stack.extend(children.iter().rev().map(|c| &c.tree)),
            }
        }
        out
    }

    /// Rewrites every non-`span` rel2par through `f`, keeping the shape.
    pub fn try_map_relations<E>(
        &self,
        f: &mut impl FnMut(&str) -> Result<String, E>,
    ) -> Result<NaryTree, E> {
        match self {
            NaryTree::Leaf(e) => Ok(NaryTree::Leaf(e.clone())),
            NaryTree::Node(children) => {
                let mut out = Vec::with_capacity(children.len());
                for c in children {
                    let rel2par = if c.rel2par.eq_ignore_ascii_case(SPAN_REL) {
                        SPAN_REL.to_string()
                    } else {
                        f(&c.rel2par)?
                    };
                    out.push(NaryChild {
                        tree: c.tree.try_map_relations(f)?,
                        role: c.role,
                        rel2par,
                    });
                }
                Ok(NaryTree::Node(out))
            }
        }
    }

    /// Relation names used anywhere in the tree, excluding `span`.
    pub fn relation_names(&self) -> Vec<&str> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(t) = stack.pop() {
            if let NaryTree::Node(children) = t {
                for c in children {
                    if !c.rel2par.eq_ignore_ascii_case(SPAN_REL) {
                        out.push(c.rel2par.as_str());
                    }
                    stack.push(&c.tree);
                }
            }
        }
        out
    }
}

struct Side {
    tree: RstTree,
    role: Role,
    rel2par: String,
}

/// Converts an n-ary tree to a binary one by right-branching grouping of children.
///
/// A k-child node becomes `child1` paired with the binarized `child2..k`. The
/// introduced group counts as a nucleus when it contains one. Mono-nuclear pairs
/// take the satellite's relation; nucleus-nucleus pairs take the node's
/// multi-nuclear relation. A pair of two satellites (only possible inside a
/// group of trailing satellites) treats the left one as the nucleus.
pub fn binarize_right_heavy(
    tree: &NaryTree,
    inventory: &LabelInventory,
) -> Result<RstTree, BinarizeError> {
    match tree {
        NaryTree::Leaf(e) => Ok(RstTree::leaf(e.clone())),
        NaryTree::Node(children) => binarize_node(children, inventory),
    }
}

fn lookup(inventory: &LabelInventory, name: &str) -> Result<Relation, BinarizeError> {
    inventory
        .find(name)
        .cloned()
        .ok_or_else(|| BinarizeError::UnmappableRelation(name.to_string()))
}

fn binarize_node(
    children: &[NaryChild],
    inventory: &LabelInventory,
) -> Result<RstTree, BinarizeError> {
    let span = NaryTree::Node(children.to_vec()).span();
    let malformed = |msg: &str| BinarizeError::MalformedTree {
        span,
        msg: msg.to_string(),
    };
    if children.len() < 2 {
        return Err(malformed("internal node needs at least two children"));
    }
    if !children.iter().any(|c| c.role == Role::Nucleus) {
        return Err(malformed("no nucleus among children"));
    }
    let multi = children
        .iter()
        .find(|c| c.role == Role::Nucleus && !c.rel2par.eq_ignore_ascii_case(SPAN_REL))
        .map(|c| c.rel2par.as_str());

    let mut sides = Vec::with_capacity(children.len());
    for c in children {
        sides.push(Side {
            tree: binarize_right_heavy(&c.tree, inventory)?,
            role: c.role,
            rel2par: c.rel2par.clone(),
        });
    }

    let mut acc = sides.pop().expect("at least two children");
    while let Some(left) = sides.pop() {
        let group_role = if left.role == Role::Nucleus || acc.role == Role::Nucleus {
            Role::Nucleus
        } else {
            Role::Satellite
        };
        let left_role = if left.role == Role::Satellite && acc.role == Role::Satellite {
            Role::Nucleus
        } else {
            left.role
        };
        let nuclearity = Nuclearity::from_roles(left_role, acc.role).expect("roles promoted");
        let relation = match nuclearity {
            Nuclearity::NucleusSatellite => lookup(inventory, &acc.rel2par)?,
            Nuclearity::SatelliteNucleus => lookup(inventory, &left.rel2par)?,
            Nuclearity::NucleusNucleus => match multi {
                Some(name) => lookup(inventory, name)?,
                None => return Err(malformed("nucleus-nucleus pair without a relation")),
            },
        };
        let group_rel = left.rel2par.clone();
        let tree = RstTree::node(left.tree, acc.tree, nuclearity, relation)
            .map_err(|e| malformed(&e.to_string()))?;
        acc = Side {
            tree,
            role: group_role,
            rel2par: group_rel,
        };
    }
    Ok(acc.tree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(i: usize) -> NaryTree {
        NaryTree::Leaf(Edu::new(i, &format!("edu {i}")).unwrap())
    }

    fn n(t: NaryTree, rel: &str) -> NaryChild {
        NaryChild::new(t, Role::Nucleus, rel)
    }

    fn s(t: NaryTree, rel: &str) -> NaryChild {
        NaryChild::new(t, Role::Satellite, rel)
    }

    fn node(left: RstTree, right: RstTree, nuc: Nuclearity, rel: &str) -> RstTree {
        RstTree::node(left, right, nuc, Relation::new(rel)).unwrap()
    }

    fn bleaf(i: usize) -> RstTree {
        RstTree::leaf(Edu::new(i, &format!("edu {i}")).unwrap())
    }

    #[test]
    fn two_children_stay_binary() {
        let inv = LabelInventory::rst_dt();
        let t = NaryTree::Node(vec![n(leaf(1), "span"), s(leaf(2), "Attribution")]);
        assert_eq!(
            binarize_right_heavy(&t, &inv).unwrap(),
            node(
                bleaf(1),
                bleaf(2),
                Nuclearity::NucleusSatellite,
                "Attribution"
            )
        );
    }

    #[test]
    fn multinuclear_list_is_right_branching() {
        let inv = LabelInventory::rst_dt();
        let t = NaryTree::Node(vec![
            n(leaf(1), "Joint"),
            n(leaf(2), "Joint"),
            n(leaf(3), "Joint"),
        ]);
        let expected = node(
            bleaf(1),
            node(bleaf(2), bleaf(3), Nuclearity::NucleusNucleus, "Joint"),
            Nuclearity::NucleusNucleus,
            "Joint",
        );
        assert_eq!(binarize_right_heavy(&t, &inv).unwrap(), expected);
    }

    #[test]
    fn satellites_around_a_nucleus() {
        let inv = LabelInventory::rst_dt();
        let t = NaryTree::Node(vec![
            s(leaf(1), "Background"),
            n(leaf(2), "span"),
            s(leaf(3), "Elaboration"),
        ]);
        let expected = node(
            bleaf(1),
            node(
                bleaf(2),
                bleaf(3),
                Nuclearity::NucleusSatellite,
                "Elaboration",
            ),
            Nuclearity::SatelliteNucleus,
            "Background",
        );
        assert_eq!(binarize_right_heavy(&t, &inv).unwrap(), expected);
    }

    #[test]
    fn trailing_satellites_keep_a_nucleus_per_node() {
        let inv = LabelInventory::rst_dt();
        let t = NaryTree::Node(vec![
            n(leaf(1), "span"),
            s(leaf(2), "Elaboration"),
            s(leaf(3), "Attribution"),
        ]);
        let expected = node(
            bleaf(1),
            node(
                bleaf(2),
                bleaf(3),
                Nuclearity::NucleusSatellite,
                "Attribution",
            ),
            Nuclearity::NucleusSatellite,
            "Elaboration",
        );
        assert_eq!(binarize_right_heavy(&t, &inv).unwrap(), expected);
    }

    #[test]
    fn errors() {
        let inv = LabelInventory::rst_dt();
        let t = NaryTree::Node(vec![n(leaf(1), "span"), s(leaf(2), "elaboration-of-sorts")]);
        assert_eq!(
            binarize_right_heavy(&t, &inv),
            Err(BinarizeError::UnmappableRelation(
                "elaboration-of-sorts".into()
            ))
        );
        let t = NaryTree::Node(vec![s(leaf(1), "Elaboration"), s(leaf(2), "Elaboration")]);
        assert!(matches!(
            binarize_right_heavy(&t, &inv),
            Err(BinarizeError::MalformedTree { .. })
        ));
        let t = NaryTree::Node(vec![n(leaf(1), "span")]);
        assert!(matches!(
            binarize_right_heavy(&t, &inv),
            Err(BinarizeError::MalformedTree { .. })
        ));
        let t = NaryTree::Node(vec![n(leaf(1), "span"), n(leaf(2), "span")]);
        assert!(matches!(
            binarize_right_heavy(&t, &inv),
            Err(BinarizeError::MalformedTree { .. })
        ));
    }
}
