//! `derive-actions`: gold decision sequences in the trace format.

use std::collections::BTreeMap;

use rstprompt::corpus::SplitName;
use rstprompt::engine::parse_document;
use serde::Serialize;

use super::{prepare_output, safe_file_stem, write_atomic, write_json, MANIFEST_FILE};
use crate::config::{OracleSpec, RunConfig};
use crate::error::CliError;
use crate::oracles::OracleSource;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeriveManifest {
    pub command: String,
    pub config_hash: String,
    pub strategy: String,
    /// Trace entries written per document.
    pub entries: BTreeMap<String, usize>,
}

pub fn trace_file_name(id: &str, strategy: rstprompt::engine::Strategy) -> String {
    format!("{id}.{}.jsonl", strategy.as_str())
}

pub fn run(cfg: &RunConfig) -> Result<DeriveManifest, CliError> {
    let mut cfg = cfg.clone();
    cfg.oracle = OracleSpec::Replay;
    cfg.cache = None;
    cfg.validate()?;
    let load = cfg.load_options()?;
    let docs = cfg.load_documents(&load, SplitName::Train)?;
    let out = prepare_output(&cfg)?;
    let source = OracleSource::build(&cfg)?;
    let mut entries = BTreeMap::new();
    for doc in &docs {
        let stem = safe_file_stem(doc.id())?;
        let oracle = source.for_document(doc)?;
        let (tree, trace) = parse_document(
            doc,
            cfg.strategy,
            oracle.as_ref(),
            &load.inventory,
            &cfg.parse_options(),
        )?;
        if Some(&tree) != doc.gold() || trace.corrected() > 0 {
            return Err(CliError::validation(format!(
                "document {}: gold decisions do not reproduce the gold tree",
                doc.id()
            )));
        }
        write_atomic(
            &out.join(trace_file_name(stem, cfg.strategy)),
            trace.to_jsonl().as_bytes(),
        )?;
        entries.insert(doc.id().to_string(), trace.entries().len());
    }
    let manifest = DeriveManifest {
        command: "derive-actions".into(),
        config_hash: cfg.hash(),
        strategy: cfg.strategy.as_str().into(),
        entries,
    };
    write_json(&out.join(MANIFEST_FILE), &manifest)?;
    Ok(manifest)
}
