#![allow(dead_code)]

use std::path::PathBuf;

use rstprompt::corpus::{load_corpus, load_document, Document, LoadOptions, RelationMap};
use rstprompt::inventory::LabelInventory;
use rstprompt::tree::Edu;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn rst_dt_options() -> LoadOptions {
    LoadOptions::new(
        LabelInventory::rst_dt(),
        RelationMap::builtin("rst-dt-coarse").unwrap(),
    )
}

pub fn wsj_1100() -> Document {
    load_document(
        &data_dir().join("fixtures/wsj_1100.out.dis"),
        &rst_dt_options(),
    )
    .unwrap()
}

pub fn mini_corpus() -> Vec<Document> {
    load_corpus(&data_dir().join("mini-corpus"), &rst_dt_options()).unwrap()
}

pub fn numbered_edus(n: usize) -> Vec<Edu> {
    (1..=n)
        .map(|i| Edu::new(i, &format!("unit {i}")).unwrap())
        .collect()
}
