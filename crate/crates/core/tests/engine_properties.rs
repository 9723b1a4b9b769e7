mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rstprompt::corpus::Document;
use rstprompt::derive::{derive_shift_reduce_sequence, derive_split_sequence};
use rstprompt::engine::{parse_bottom_up, parse_top_down, ParseOptions};
use rstprompt::eval::{micro_f1, score_document, EvalOptions};
use rstprompt::inventory::LabelInventory;
use rstprompt::oracle::{RandomOracle, ReplayOracle, ScriptedOracle};
use rstprompt::prompt::PromptKind;
use rstprompt::synth::random_document;
use rstprompt::tree::RstTree;

fn doc(seed: u64, n: usize, inv: &LabelInventory) -> Document {
    random_document(&mut ChaCha8Rng::seed_from_u64(seed), "p", n, inv)
}

fn opts(skip_forced: bool) -> ParseOptions {
    ParseOptions {
        skip_forced,
        ..ParseOptions::default()
    }
}

fn assert_covers(tree: &RstTree, n: usize) {
    tree.validate().unwrap();
    assert_eq!(tree.leaves().len(), n);
    assert_eq!(tree.span().first, 1);
    assert_eq!(tree.internal_count(), n - 1);
}

#[test]
fn replay_closure_on_bundled_documents() {
    let inv = LabelInventory::rst_dt();
    let mut docs = common::mini_corpus();
    docs.push(common::wsj_1100());
    for d in &docs {
        let gold = d.gold().unwrap();
        for skip in [true, false] {
            let o = ReplayOracle::bottom_up(&derive_shift_reduce_sequence(gold), skip);
            let (bu, _) = parse_bottom_up(d, &o, &inv, &opts(skip)).unwrap();
            assert_eq!(&bu, gold, "bottom-up {}", d.id());
            let o = ReplayOracle::top_down(&derive_split_sequence(gold), skip);
            let (td, _) = parse_top_down(d, &o, &inv, &opts(skip)).unwrap();
            assert_eq!(&td, gold, "top-down {}", d.id());
            let f = micro_f1(&score_document(&td, gold, EvalOptions::default()).unwrap()).unwrap();
            assert_eq!((f.span, f.nuc, f.rel, f.full), (100.0, 100.0, 100.0, 100.0));
        }
    }
}

#[test]
fn garbage_oracle_flags_every_decision() {
    let inv = LabelInventory::rst_dt();
    let d = doc(9, 12, &inv);
    let o = ScriptedOracle::constant("I am not sure");
    for skip in [true, false] {
        let (tree, trace) = parse_bottom_up(&d, &o, &inv, &opts(skip)).unwrap();
        assert_covers(&tree, 12);
        let asked: Vec<_> = trace.entries().iter().filter(|e| !e.forced).collect();
        assert!(!asked.is_empty());
        assert!(asked.iter().all(|e| e.corrected));
        for e in trace
            .entries()
            .iter()
            .filter(|e| e.kind == PromptKind::Action && !e.forced)
        {
            // Shift wherever it is legal
            let queue_empty = e.state.ends_with("queue=empty");
            assert_eq!(e.decision, if queue_empty { "reduce" } else { "shift" });
        }
        let (tree, trace) = parse_top_down(&d, &o, &inv, &opts(skip)).unwrap();
        assert_covers(&tree, 12);
        assert!(trace
            .entries()
            .iter()
            .filter(|e| !e.forced)
            .all(|e| e.corrected));
        for e in trace
            .entries()
            .iter()
            .filter(|e| e.kind == PromptKind::Split)
        {
            assert_eq!(e.decision, "0");
        }
    }
}

#[test]
fn corrections_use_defaults() {
    let inv = LabelInventory::rst_dt();
    let d = doc(4, 5, &inv);
    let o = ScriptedOracle::constant("???");
    let (tree, trace) = parse_bottom_up(&d, &o, &inv, &opts(true)).unwrap();
    for n in tree.preorder_nodes() {
        assert_eq!(n.nuclearity().as_str(), "nucleus-satellite");
        assert_eq!(n.relation().as_str(), "Elaboration");
    }
    assert_eq!(trace.corrected(), trace.queried());
}

#[test]
fn illegal_answer_takes_the_only_legal_action() {
    let inv = LabelInventory::rst_dt();
    let d = doc(5, 4, &inv);
    // strict mode asks even when only one action is legal
    let o = ScriptedOracle::new("always-reduce", |q| match q.kind {
        PromptKind::Action => "reduce".into(),
        PromptKind::Nuclearity => "nucleus-nucleus".into(),
        _ => "Joint".into(),
    });
    let (tree, trace) = parse_bottom_up(&d, &o, &inv, &opts(false)).unwrap();
    assert_covers(&tree, 4);
    let first = &trace.entries()[0];
    assert_eq!(first.decision, "shift");
    assert!(first.corrected);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn replay_closure(seed in any::<u64>(), n in 1usize..40, skip in any::<bool>()) {
        let inv = LabelInventory::rst_dt();
        let d = doc(seed, n, &inv);
        let gold = d.gold().unwrap();
        let o = ReplayOracle::bottom_up(&derive_shift_reduce_sequence(gold), skip);
        prop_assert_eq!(&parse_bottom_up(&d, &o, &inv, &opts(skip)).unwrap().0, gold);
        prop_assert_eq!(o.remaining(), 0);
        let o = ReplayOracle::top_down(&derive_split_sequence(gold), skip);
        prop_assert_eq!(&parse_top_down(&d, &o, &inv, &opts(skip)).unwrap().0, gold);
        prop_assert_eq!(o.remaining(), 0);
    }

    #[test]
    fn adversarial_oracle_yields_valid_trees(seed in any::<u64>(), n in 1usize..=30, skip in any::<bool>()) {
        let inv = LabelInventory::rst_dt();
        let d = doc(seed, n, &inv);
        let o = RandomOracle::new(seed);
        let (tree, trace) = parse_bottom_up(&d, &o, &inv, &opts(skip)).unwrap();
        assert_covers(&tree, n);
        prop_assert_eq!(trace.count(PromptKind::Action), 2 * n - 1);
        prop_assert!(trace.queried_kind(PromptKind::Action) < 2 * n);
        prop_assert_eq!(trace.queried_kind(PromptKind::Nuclearity), n - 1);
        prop_assert_eq!(trace.queried_kind(PromptKind::Relation), n - 1);

        let (tree, trace) = parse_top_down(&d, &o, &inv, &opts(skip)).unwrap();
        assert_covers(&tree, n);
        prop_assert_eq!(trace.count(PromptKind::Split), n - 1);
        prop_assert_eq!(trace.queried_kind(PromptKind::Nuclearity), n - 1);
        prop_assert_eq!(trace.queried_kind(PromptKind::Relation), n - 1);
    }

    #[test]
    fn identical_answers_give_identical_output(seed in any::<u64>(), n in 1usize..20) {
        let inv = LabelInventory::instr_dt();
        let d = doc(seed, n, &inv);
        let a = parse_top_down(&d, &RandomOracle::new(seed), &inv, &opts(true)).unwrap();
        let b = parse_top_down(&d, &RandomOracle::new(seed), &inv, &opts(true)).unwrap();
        prop_assert_eq!(a, b);
        let a = parse_bottom_up(&d, &RandomOracle::new(seed), &inv, &opts(true)).unwrap();
        let b = parse_bottom_up(&d, &RandomOracle::new(seed), &inv, &opts(true)).unwrap();
        prop_assert_eq!(a, b);
    }
}
