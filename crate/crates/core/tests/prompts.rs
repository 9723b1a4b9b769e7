mod common;

use common::{golden, wsj_1100};
use rstprompt::derive::{derive_shift_reduce_sequence, GoldStep};
use rstprompt::engine::{Action, ParserState};
use rstprompt::inventory::LabelInventory;
use rstprompt::prompt::{
    render_action_prompt, render_nuclearity_prompt, render_relation_prompt, render_split_prompt,
    span_text, PromptConfig, PromptError,
};
use rstprompt::tree::{Edu, Nuclearity};

fn mid_parse_state() -> ParserState {
    let doc = wsj_1100();
    let gold = doc.gold().unwrap();
    let mut state = ParserState::new(doc.edus()).unwrap();
    // shift e1, shift e2, reduce (e1 e2), shift e3
    for step in &derive_shift_reduce_sequence(gold)[..4] {
        let action = match step {
            GoldStep::Shift => Action::Shift,
            GoldStep::Reduce {
                nuclearity,
                relation,
            } => Action::Reduce {
                nuclearity: *nuclearity,
                relation: relation.clone(),
            },
        };
        state = state.apply(action).unwrap();
    }
    state
}

#[test]
fn action_prompt_mid_parse() {
    let state = mid_parse_state();
    let prompt = render_action_prompt(&state, &PromptConfig::default());
    assert_eq!(prompt, golden("action_mid_parse.txt"));
    assert!(prompt.contains("Stack1: Terms weren't disclosed.\n"));
}

#[test]
fn action_prompt_empty_slots() {
    let doc = wsj_1100();
    let edus = &doc.edus()[..2];
    let state = ParserState::new(edus).unwrap();
    assert_eq!(
        render_action_prompt(&state, &PromptConfig::default()),
        golden("action_initial.txt")
    );
    let state = state
        .apply(Action::Shift)
        .unwrap()
        .apply(Action::Shift)
        .unwrap();
    assert_eq!(
        render_action_prompt(&state, &PromptConfig::default()),
        golden("action_empty_queue.txt")
    );
}

#[test]
fn action_prompt_is_deterministic() {
    let state = mid_parse_state();
    let cfg = PromptConfig::default();
    assert_eq!(
        render_action_prompt(&state, &cfg),
        render_action_prompt(&state, &cfg)
    );
}

#[test]
fn nuclearity_prompt() {
    let doc = wsj_1100();
    let e = doc.edus();
    let got = render_nuclearity_prompt(
        &span_text(&e[..2]),
        &span_text(&e[2..3]),
        &PromptConfig::default(),
    );
    assert_eq!(got, golden("nuclearity_two_spans.txt"));
    let single = render_nuclearity_prompt(e[3].text(), e[4].text(), &PromptConfig::default());
    assert!(single.starts_with("Span2: Shaw-Walker,\nSpan1: based in Muskegon, Mich.,\n"));
}

#[test]
fn relation_prompt_lists_inventory() {
    let doc = wsj_1100();
    let e = doc.edus();
    let cfg = PromptConfig::default();
    let rst = LabelInventory::rst_dt();
    let got = render_relation_prompt(
        &span_text(&e[..2]),
        &span_text(&e[2..3]),
        Nuclearity::NucleusSatellite,
        &rst,
        &cfg,
    );
    assert_eq!(got, golden("relation_rst_dt.txt"));
    let options = got.rsplit_once('(').unwrap().1.trim_end_matches("):");
    assert_eq!(options.split(", ").count(), 18);
    assert!(got.contains("\nNucleus label: nucleus-satellite\n"));

    let instr = LabelInventory::instr_dt();
    let got = render_relation_prompt(
        e[3].text(),
        e[4].text(),
        Nuclearity::NucleusSatellite,
        &instr,
        &cfg,
    );
    assert_eq!(got, golden("relation_instr_dt.txt"));
    let options = got.rsplit_once('(').unwrap().1.trim_end_matches("):");
    assert_eq!(options.split(", ").count(), 39);
}

#[test]
fn split_prompts() {
    let doc = wsj_1100();
    let e = doc.edus();
    let cfg = PromptConfig::default();
    assert_eq!(
        render_split_prompt(&e[3..6], &cfg).unwrap(),
        golden("split_three.txt")
    );
    assert_eq!(
        render_split_prompt(&e[..2], &cfg).unwrap(),
        golden("split_two.txt")
    );
    assert_eq!(
        render_split_prompt(&e[..1], &cfg),
        Err(PromptError::DegenerateSpan(1))
    );
}

#[test]
fn split_prompt_renumbering_invariance() {
    let texts = [
        "Shaw-Walker,",
        "based in Muskegon, Mich.,",
        "makes furniture.",
    ];
    let at = |first: usize| -> Vec<Edu> {
        texts
            .iter()
            .enumerate()
            .map(|(i, t)| Edu::new(first + i, t).unwrap())
            .collect()
    };
    let cfg = PromptConfig::default();
    assert_eq!(
        render_split_prompt(&at(4), &cfg).unwrap(),
        render_split_prompt(&at(1), &cfg).unwrap()
    );
}

#[test]
fn long_spans_are_center_elided() {
    let long = "word ".repeat(200);
    let cfg = PromptConfig {
        max_span_chars: Some(60),
    };
    let p = render_nuclearity_prompt(long.trim(), "short", &cfg);
    let span2 = p.lines().next().unwrap().trim_start_matches("Span2: ");
    assert!(span2.chars().count() <= 60);
    assert!(span2.contains(" [...] "));
    assert!(span2.starts_with("word") && span2.ends_with("word"));
    assert!(p.contains("\nSpan1: short\n"));
}
