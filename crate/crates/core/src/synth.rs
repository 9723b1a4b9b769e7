//! Seeded synthetic trees and documents for tests, benchmarks and the bundled mini-corpus.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::corpus::Document;
use crate::derive::{tree_from_splits, GoldSplit};
use crate::inventory::LabelInventory;
use crate::nary::{NaryChild, NaryTree, SPAN_REL};
use crate::tree::{Edu, Nuclearity, Role, RstTree, Span};

const WORDS: &[&str] = &[
    "the",
    "company",
    "said",
    "its",
    "shares",
    "rose",
    "sharply",
    "after",
    "analysts",
    "expected",
    "a",
    "loss",
    "in",
    "third",
    "quarter",
    "because",
    "demand",
    "for",
    "steel",
    "fell",
    "but",
    "investors",
    "remained",
    "cautious",
    "while",
    "prices",
    "of",
    "bonds",
    "were",
    "mixed",
    "and",
    "officials",
    "declined",
    "to",
    "comment",
    "on",
    "plan",
    "which",
    "would",
    "cut",
    "costs",
    "by",
    "closing",
    "two",
    "plants",
    "although",
    "unions",
    "oppose",
    "it",
    "yesterday",
    "billion",
    "dollars",
    "(about",
    "half)",
    "its",
    "rival's",
    "net",
    "income",
    "jumped",
    "12%",
];

/// Satellite relations, fine-grained treebank names.
pub const MONONUCLEAR: &[&str] = &[
    "elaboration-additional",
    "elaboration-object-attribute-e",
    "attribution",
    "attribution-e",
    "background",
    "circumstance",
    "cause",
    "result",
    "condition",
    "purpose",
    "evidence",
    "reason",
    "concession",
    "antithesis",
    "manner",
    "means",
    "evaluation-s",
    "comment",
    "summary-n",
    "temporal-after",
    "example",
    "explanation-argumentative",
    "hypothetical",
    "enablement",
    "interpretation-s",
    "rhetorical-question",
    "preference",
    "analogy",
    "problem-solution-s",
    "topic-drift",
];

/// Relations holding among coordinate nuclei, fine-grained treebank names.
pub const MULTINUCLEAR: &[&str] = &[
    "List",
    "Contrast",
    "Same-Unit",
    "Sequence",
    "Temporal-Same-Time",
    "Disjunction",
    "Comparison",
    "Cause-Result",
    "TextualOrganization",
    "Topic-Shift",
    "Proportion",
    "Inverted-Sequence",
];

pub fn random_sentence<R: Rng>(rng: &mut R) -> String {
    let n = rng.gen_range(3..=12);
    let mut words: Vec<String> = (0..n)
        .map(|_| WORDS.choose(rng).expect("non-empty").to_string())
        .collect();
    if let Some(first) = words.first_mut() {
        let mut c = first.chars();
        if let Some(h) = c.next() {
            *first = h.to_uppercase().chain(c).collect();
        }
    }
    let mut s = words.join(" ");
    if rng.gen_bool(0.4) {
        s.push(if rng.gen_bool(0.8) { '.' } else { ',' });
    }
    s
}

pub fn random_edus<R: Rng>(rng: &mut R, n: usize) -> Vec<Edu> {
    (1..=n)
        .map(|i| Edu::new(i, &random_sentence(rng)).expect("sentences are non-empty"))
        .collect()
}

/// Splits `n` into `parts` positive sizes.
fn partition<R: Rng>(rng: &mut R, n: usize, parts: usize) -> Vec<usize> {
    let mut cuts: Vec<usize> = (1..n).collect::<Vec<_>>();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(parts);
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(n)) {
        sizes.push(c - prev);
        prev = c;
    }
    sizes
}

/// Random binary tree over `edus` with labels drawn from `inventory`.
pub fn random_binary_tree<R: Rng>(
    rng: &mut R,
    edus: &[Edu],
    inventory: &LabelInventory,
) -> RstTree {
    assert!(!edus.is_empty(), "need at least one EDU");
    let first = edus[0].index();
    let mut splits = Vec::new();
    let mut pending = vec![Span::new(first, first + edus.len() - 1)];
    while let Some(span) = pending.pop() {
        if span.len() == 1 {
            continue;
        }
        let k = rng.gen_range(0..span.len() - 1);
        let nuclearity = *Nuclearity::ALL.choose(rng).expect("non-empty");
        let relation = inventory
            .relations()
            .choose(rng)
            .expect("non-empty inventory")
            .clone();
        let (l, r) = span.split_at(k);
        pending.push(l);
        pending.push(r);
        splits.push(GoldSplit {
            span,
            k,
            nuclearity,
            relation,
        });
    }
    tree_from_splits(edus, &splits).expect("splits cover the span")
}

/// Gold-annotated document of `n` random EDUs with a random binary tree.
pub fn random_document<R: Rng>(
    rng: &mut R,
    id: &str,
    n: usize,
    inventory: &LabelInventory,
) -> Document {
    let edus = random_edus(rng, n);
    let tree = random_binary_tree(rng, &edus, inventory);
    Document::from_tree(id, tree).expect("generated tree is valid")
}

/// Random treebank-style n-ary tree over `n` EDUs with fine-grained relation names.
///
/// Each constituent has 2 to 4 children and is either multi-nuclear (all
/// children nuclei sharing one relation) or has one nucleus and satellites.
pub fn random_nary_tree<R: Rng>(rng: &mut R, n: usize) -> NaryTree {
    let edus = random_edus(rng, n);
    nary_over(rng, &edus)
}

fn nary_over<R: Rng>(rng: &mut R, edus: &[Edu]) -> NaryTree {
    if edus.len() == 1 {
        return NaryTree::Leaf(edus[0].clone());
    }
    let parts = rng.gen_range(2..=edus.len().min(4));
    let sizes = partition(rng, edus.len(), parts);
    let multi = rng.gen_bool(0.35);
    let multi_rel = *MULTINUCLEAR.choose(rng).expect("non-empty");
    let nucleus = rng.gen_range(0..parts);
    let mut children = Vec::with_capacity(parts);
    let mut at = 0;
    for (i, size) in sizes.into_iter().enumerate() {
        let tree = nary_over(rng, &edus[at..at + size]);
        at += size;
        let child = if multi {
            NaryChild::new(tree, Role::Nucleus, multi_rel)
        } else if i == nucleus {
            NaryChild::new(tree, Role::Nucleus, SPAN_REL)
        } else {
            let rel = *MONONUCLEAR.choose(rng).expect("non-empty");
            NaryChild::new(tree, Role::Satellite, rel)
        };
        children.push(child);
    }
    NaryTree::Node(children)
}
