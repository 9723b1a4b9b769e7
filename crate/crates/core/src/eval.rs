//! Standard-Parseval span scores: unlabeled, nuclearity, relation and fully labeled.
//!
//! Every internal node contributes one tuple (span, nuclearity, relation); the
//! root is included unless [`EvalOptions::exclude_root`] is set. Leaves never
//! count. Corpus figures are micro-averaged over summed counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inventory::LabelInventory;
use crate::tree::{Nuclearity, Relation, RstTree, Span};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("prediction covers {predicted} EDUs but gold covers {gold}")]
    SegmentationMismatch { predicted: usize, gold: usize },
    #[error("no scorable spans in the corpus")]
    EmptyCorpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Span,
    Nuc,
    Rel,
    Full,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Span, Level::Nuc, Level::Rel, Level::Full];

    pub fn name(self) -> &'static str {
        match self {
            Level::Span => "Span",
            Level::Nuc => "Nuc",
            Level::Rel => "Rel",
            Level::Full => "Full",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub exclude_root: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpanTuple {
    pub span: Span,
    pub nuclearity: Nuclearity,
    pub relation: Relation,
}

pub fn extract_tuples(tree: &RstTree, opts: EvalOptions) -> Vec<SpanTuple> {
    let root = tree.span();
    tree.preorder_nodes()
        .into_iter()
        .map(|n| SpanTuple {
            span: Span::new(n.left().span().first, n.right().span().last),
            nuclearity: n.nuclearity(),
            relation: n.relation().clone(),
        })
        .filter(|t| !(opts.exclude_root && t.span == root))
        .collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCounts {
    pub matched: u64,
    pub predicted: u64,
    pub gold: u64,
}

impl LevelCounts {
    pub fn precision(&self) -> f64 {
        ratio(self.matched, self.predicted)
    }

    pub fn recall(&self) -> f64 {
        ratio(self.matched, self.gold)
    }

    /// F1 as a fraction in [0, 1]; 0 when nothing matched.
    pub fn f1(&self) -> f64 {
        let (p, r) = (self.precision(), self.recall());
        if p + r == 0.0 {
            0.0
        } else {
            2.0 * p * r / (p + r)
        }
    }
}

fn ratio(a: u64, b: u64) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParsevalCounts {
    pub span: LevelCounts,
    pub nuc: LevelCounts,
    pub rel: LevelCounts,
    pub full: LevelCounts,
}

impl ParsevalCounts {
    pub fn level(&self, level: Level) -> &LevelCounts {
        match level {
            Level::Span => &self.span,
            Level::Nuc => &self.nuc,
            Level::Rel => &self.rel,
            Level::Full => &self.full,
        }
    }

    fn level_mut(&mut self, level: Level) -> &mut LevelCounts {
        match level {
            Level::Span => &mut self.span,
            Level::Nuc => &mut self.nuc,
            Level::Rel => &mut self.rel,
            Level::Full => &mut self.full,
        }
    }

    pub fn merge(&mut self, other: &ParsevalCounts) {
        for level in Level::ALL {
            let (a, b) = (self.level_mut(level), other.level(level));
            a.matched += b.matched;
            a.predicted += b.predicted;
            a.gold += b.gold;
        }
    }
}

impl std::iter::Sum for ParsevalCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(ParsevalCounts::default(), |mut acc, c| {
            acc.merge(&c);
            acc
        })
    }
}

/// Multiset intersection size of two tuple lists under a key.
fn matched_by<K: Eq + std::hash::Hash>(
    pred: &[SpanTuple],
    gold: &[SpanTuple],
    key: impl Fn(&SpanTuple) -> K,
) -> u64 {
    let mut remaining: HashMap<K, u64> = HashMap::new();
    for t in gold {
        *remaining.entry(key(t)).or_default() += 1;
    }
    let mut matched = 0;
    for t in pred {
        if let Some(c) = remaining.get_mut(&key(t)) {
            if *c > 0 {
                *c -= 1;
                matched += 1;
            }
        }
    }
    matched
}

pub fn score_document(
    pred: &RstTree,
    gold: &RstTree,
    opts: EvalOptions,
) -> Result<ParsevalCounts, EvalError> {
    let (p, g) = (pred.span().len(), gold.span().len());
    if p != g {
        return Err(EvalError::SegmentationMismatch {
            predicted: p,
            gold: g,
        });
    }
    let pt = extract_tuples(pred, opts);
    let gt = extract_tuples(gold, opts);
    let counts = |matched| LevelCounts {
        matched,
        predicted: pt.len() as u64,
        gold: gt.len() as u64,
    };
    Ok(ParsevalCounts {
        span: counts(matched_by(&pt, &gt, |t| t.span)),
        nuc: counts(matched_by(&pt, &gt, |t| (t.span, t.nuclearity))),
        rel: counts(matched_by(&pt, &gt, |t| (t.span, t.relation.clone()))),
        full: counts(matched_by(&pt, &gt, |t| t.clone())),
    })
}

/// Rounds a percentage half away from zero to one decimal.
pub fn round1(x: f64) -> f64 {
    (x * 10.0).round() / 10.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Scores {
    pub span: f64,
    pub nuc: f64,
    pub rel: f64,
    pub full: f64,
}

impl F1Scores {
    pub fn level(&self, level: Level) -> f64 {
        match level {
            Level::Span => self.span,
            Level::Nuc => self.nuc,
            Level::Rel => self.rel,
            Level::Full => self.full,
        }
    }
}

/// Unrounded micro F1 percentages.
pub fn micro_f1_exact(counts: &ParsevalCounts) -> Result<F1Scores, EvalError> {
    if counts.span.predicted == 0 || counts.span.gold == 0 {
        return Err(EvalError::EmptyCorpus);
    }
    let pct = |l: Level| 100.0 * counts.level(l).f1();
    Ok(F1Scores {
        span: pct(Level::Span),
        nuc: pct(Level::Nuc),
        rel: pct(Level::Rel),
        full: pct(Level::Full),
    })
}

/// Micro F1 percentages rounded to one decimal.
pub fn micro_f1(counts: &ParsevalCounts) -> Result<F1Scores, EvalError> {
    let f = micro_f1_exact(counts)?;
    Ok(F1Scores {
        span: round1(f.span),
        nuc: round1(f.nuc),
        rel: round1(f.rel),
        full: round1(f.full),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationRow {
    pub relation: String,
    pub matched: u64,
    pub predicted: u64,
    pub gold: u64,
    /// Percentage, rounded to one decimal; 0 when undefined.
    pub f1: f64,
}

/// Per-relation tallies accumulated over documents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationCounts {
    counts: BTreeMap<String, LevelCounts>,
}

impl RelationCounts {
    pub fn add_document(
        &mut self,
        pred: &RstTree,
        gold: &RstTree,
        opts: EvalOptions,
    ) -> Result<(), EvalError> {
        let (p, g) = (pred.span().len(), gold.span().len());
        if p != g {
            return Err(EvalError::SegmentationMismatch {
                predicted: p,
                gold: g,
            });
        }
        let pt = extract_tuples(pred, opts);
        let gt = extract_tuples(gold, opts);
        for t in &pt {
            self.counts
                .entry(t.relation.to_string())
                .or_default()
                .predicted += 1;
        }
        for t in &gt {
            self.counts.entry(t.relation.to_string()).or_default().gold += 1;
        }
        let mut gold_keys: HashMap<(Span, &Relation), u64> = HashMap::new();
        for t in &gt {
            *gold_keys.entry((t.span, &t.relation)).or_default() += 1;
        }
        for t in &pt {
            if let Some(c) = gold_keys.get_mut(&(t.span, &t.relation)) {
                if *c > 0 {
                    *c -= 1;
                    self.counts
                        .entry(t.relation.to_string())
                        .or_default()
                        .matched += 1;
                }
            }
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &RelationCounts) {
        for (rel, c) in &other.counts {
            let a = self.counts.entry(rel.clone()).or_default();
            a.matched += c.matched;
            a.predicted += c.predicted;
            a.gold += c.gold;
        }
    }

    /// One row per inventory relation in inventory order, then any other labels seen, sorted.
    pub fn rows(&self, inventory: &LabelInventory) -> Vec<RelationRow> {
        let mut names: Vec<String> = inventory
            .relations()
            .iter()
            .map(|r| r.to_string())
            .collect();
        for extra in self.counts.keys() {
            if !names.contains(extra) {
                names.push(extra.clone());
            }
        }
        names
            .into_iter()
            .map(|name| {
                let c = self.counts.get(&name).copied().unwrap_or_default();
                RelationRow {
                    f1: round1(100.0 * c.f1()),
                    relation: name,
                    matched: c.matched,
                    predicted: c.predicted,
                    gold: c.gold,
                }
            })
            .collect()
    }
}

pub fn per_relation_f1(
    pairs: &[(&RstTree, &RstTree)],
    inventory: &LabelInventory,
    opts: EvalOptions,
) -> Result<Vec<RelationRow>, EvalError> {
    let mut acc = RelationCounts::default();
    for (pred, gold) in pairs {
        acc.add_document(pred, gold, opts)?;
    }
    Ok(acc.rows(inventory))
}

/// Aligned text table of the four levels.
pub fn format_scores(scores: &F1Scores) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6} {:>6} {:>6} {:>6}", "Span", "Nuc", "Rel", "Full");
    let _ = writeln!(
        out,
        "{:>6.1} {:>6.1} {:>6.1} {:>6.1}",
        scores.span, scores.nuc, scores.rel, scores.full
    );
    out
}

pub fn scores_csv(scores: &F1Scores) -> String {
    format!(
        "level,f1\nSpan,{:.1}\nNuc,{:.1}\nRel,{:.1}\nFull,{:.1}\n",
        scores.span, scores.nuc, scores.rel, scores.full
    )
}

pub fn format_relation_table(rows: &[RelationRow]) -> String {
    let width = rows
        .iter()
        .map(|r| r.relation.len())
        .max()
        .unwrap_or(8)
        .max(8);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$} {:>8} {:>9} {:>8} {:>6}",
        "relation", "matched", "predicted", "gold", "F1"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$} {:>8} {:>9} {:>8} {:>6.1}",
            r.relation, r.matched, r.predicted, r.gold, r.f1
        );
    }
    out
}

/// Comma-separated per-relation records; `gold` is the label frequency.
pub fn relation_csv(rows: &[RelationRow]) -> String {
    let mut out = String::from("relation,matched,predicted,gold,f1\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.1}",
            r.relation, r.matched, r.predicted, r.gold, r.f1
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Edu;

    fn leaf(i: usize) -> RstTree {
        RstTree::leaf(Edu::new(i, &format!("e{i}")).unwrap())
    }

    fn ns(l: RstTree, r: RstTree, rel: &str) -> RstTree {
        RstTree::node(l, r, Nuclearity::NucleusSatellite, Relation::new(rel)).unwrap()
    }

    const ALL: EvalOptions = EvalOptions {
        exclude_root: false,
    };

    #[test]
    fn tuple_counts() {
        assert!(extract_tuples(&leaf(1), ALL).is_empty());
        let two = ns(leaf(1), leaf(2), "Elaboration");
        let t = extract_tuples(&two, ALL);
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].span, Span::new(1, 2));
        assert!(extract_tuples(&two, EvalOptions { exclude_root: true }).is_empty());
    }

    #[test]
    fn shape_mismatch_is_half() {
        let gold = ns(ns(leaf(1), leaf(2), "Elaboration"), leaf(3), "Elaboration");
        let pred = ns(leaf(1), ns(leaf(2), leaf(3), "Elaboration"), "Elaboration");
        let c = score_document(&pred, &gold, ALL).unwrap();
        assert_eq!(c.span.matched, 1);
        assert_eq!(micro_f1(&c).unwrap().span, 50.0);
    }

    #[test]
    fn relation_flip_is_half() {
        let gold = ns(ns(leaf(1), leaf(2), "Elaboration"), leaf(3), "Elaboration");
        let pred = ns(ns(leaf(1), leaf(2), "Contrast"), leaf(3), "Elaboration");
        let f = micro_f1(&score_document(&pred, &gold, ALL).unwrap()).unwrap();
        assert_eq!((f.span, f.nuc, f.rel, f.full), (100.0, 100.0, 50.0, 50.0));
    }

    #[test]
    fn empty_and_zero() {
        assert_eq!(
            micro_f1(&ParsevalCounts::default()),
            Err(EvalError::EmptyCorpus)
        );
        let c = LevelCounts {
            matched: 0,
            predicted: 3,
            gold: 3,
        };
        assert_eq!(c.f1(), 0.0);
    }

    #[test]
    fn segmentation_mismatch() {
        let a = ns(leaf(1), leaf(2), "Elaboration");
        let b = ns(a.clone(), leaf(3), "Elaboration");
        assert!(matches!(
            score_document(&a, &b, ALL),
            Err(EvalError::SegmentationMismatch {
                predicted: 2,
                gold: 3
            })
        ));
    }

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(round1(12.25), 12.3);
        assert_eq!(round1(-12.25), -12.3);
        assert_eq!(round1(33.25), 33.3);
        assert_eq!(round1(50.0), 50.0);
    }

    #[test]
    fn relation_rows_cover_inventory() {
        let inv = LabelInventory::rst_dt();
        let t = ns(leaf(1), leaf(2), "Elaboration");
        let rows = per_relation_f1(&[(&t, &t)], &inv, ALL).unwrap();
        assert_eq!(rows.len(), 18);
        assert_eq!(rows[0].relation, "Elaboration");
        assert_eq!(rows[0].f1, 100.0);
        assert!(rows[1..].iter().all(|r| r.f1 == 0.0 && r.gold == 0));
        assert!(relation_csv(&rows)
            .starts_with("relation,matched,predicted,gold,f1\nElaboration,1,1,1,100.0\n"));
    }
}
