//! `parse`: predicted trees and traces for a corpus.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use rstprompt::corpus::{write_tree, Document, SplitName};
use rstprompt::engine::parse_document;
use rstprompt::inventory::LabelInventory;
use rstprompt::oracle::CacheStats;
use rstprompt::trace::ParseTrace;
use serde::Serialize;

use super::{prepare_output, safe_file_stem, write_atomic, write_json, MANIFEST_FILE};
use crate::config::RunConfig;
use crate::error::{CliError, FailureKind};
use crate::oracles::OracleSource;

pub const TREES_DIR: &str = "trees";
pub const TRACES_DIR: &str = "traces";
pub const ERRORS_FILE: &str = "errors.log";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DecisionCounts {
    /// Trace entries of this kind, forced or not.
    pub decisions: usize,
    pub forced: usize,
    pub queried: usize,
    pub corrected: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailedDocument {
    pub document: String,
    pub kind: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseManifest {
    pub command: String,
    pub config_hash: String,
    pub strategy: String,
    pub oracle: String,
    pub documents: usize,
    pub parsed: usize,
    pub failed: Vec<FailedDocument>,
    pub cache: Option<CacheStats>,
    pub decisions: BTreeMap<String, DecisionCounts>,
}

fn tally(counts: &mut BTreeMap<String, DecisionCounts>, trace: &ParseTrace) {
    for e in trace.entries() {
        let c = counts.entry(e.kind.as_str().to_string()).or_default();
        c.decisions += 1;
        c.forced += e.forced as usize;
        c.queried += !e.forced as usize;
        c.corrected += e.corrected as usize;
    }
}

fn parse_one(
    doc: &Document,
    cfg: &RunConfig,
    source: &OracleSource,
    inventory: &LabelInventory,
    out: &Path,
) -> Result<ParseTrace, CliError> {
    let stem = safe_file_stem(doc.id())?;
    let oracle = source.for_document(doc)?;
    let (tree, trace) = parse_document(
        doc,
        cfg.strategy,
        oracle.as_ref(),
        inventory,
        &cfg.parse_options(),
    )?;
    let mut bracket = write_tree(&tree);
    bracket.push('\n');
    write_atomic(
        &out.join(TREES_DIR).join(format!("{stem}.tree")),
        bracket.as_bytes(),
    )?;
    write_atomic(
        &out.join(TRACES_DIR).join(format!("{stem}.jsonl")),
        trace.to_jsonl().as_bytes(),
    )?;
    Ok(trace)
}

/// Parses every document; successful documents are written even when others fail.
pub fn run(cfg: &RunConfig) -> Result<ParseManifest, CliError> {
    cfg.validate()?;
    let opts = cfg.load_options()?;
    let docs = cfg.load_documents(&opts, SplitName::Test)?;
    let source = OracleSource::build(cfg)?;
    let out = prepare_output(cfg)?;
    for sub in [TREES_DIR, TRACES_DIR] {
        fs::create_dir_all(out.join(sub))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| CliError::config(e.to_string()))?;
    let results: Vec<Result<ParseTrace, CliError>> = pool.install(|| {
        docs.par_iter()
            .map(|d| parse_one(d, cfg, &source, &opts.inventory, out))
            .collect()
    });

    let mut decisions = BTreeMap::new();
    for kind in cfg.strategy.kinds() {
        decisions.insert(kind.as_str().to_string(), DecisionCounts::default());
    }
    let mut failed = Vec::new();
    let mut kinds = Vec::new();
    for (doc, r) in docs.iter().zip(results) {
        match r {
            Ok(trace) => tally(&mut decisions, &trace),
            Err(e) => {
                log::error!("{}: {e}", doc.id());
                kinds.push(e.kind);
                failed.push(FailedDocument {
                    document: doc.id().to_string(),
                    kind: e.kind.as_str().to_string(),
                    error: e.message,
                });
            }
        }
    }
    let manifest = ParseManifest {
        command: "parse".into(),
        config_hash: cfg.hash(),
        strategy: cfg.strategy.as_str().into(),
        oracle: source.fingerprint(),
        documents: docs.len(),
        parsed: docs.len() - failed.len(),
        failed,
        cache: source.cache_stats(),
        decisions,
    };
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    let errors_path = out.join(ERRORS_FILE);
    if manifest.failed.is_empty() {
        if errors_path.exists() {
            fs::remove_file(&errors_path)?;
        }
        return Ok(manifest);
    }
    let log: String = manifest
        .failed
        .iter()
        .map(|f| format!("{}\t{}\t{}\n", f.document, f.kind, f.error))
        .collect();
    write_atomic(&errors_path, log.as_bytes())?;
    let kind = FailureKind::most_severe(kinds).expect("at least one failure");
    Err(CliError::new(
        kind,
        format!(
            "{} of {} documents failed; see {}",
            manifest.failed.len(),
            manifest.documents,
            errors_path.display()
        ),
    ))
}
