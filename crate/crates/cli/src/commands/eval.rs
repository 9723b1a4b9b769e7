//! `eval` and `report-relations`: Standard-Parseval scores of predicted trees against gold.

use std::fs;
use std::path::{Path, PathBuf};

use rstprompt::corpus::{read_tree, SplitName};
use rstprompt::eval::{
    micro_f1, score_document, EvalOptions, F1Scores, ParsevalCounts, RelationCounts, RelationRow,
};
use rstprompt::tree::RstTree;

use super::parse::TREES_DIR;
use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct EvalReport {
    pub documents: usize,
    pub counts: ParsevalCounts,
    pub scores: F1Scores,
    pub relations: Vec<RelationRow>,
}

/// Prediction files live in `<dir>/trees/` for `parse` output, else directly in `dir`.
pub fn prediction_dir(dir: &Path) -> PathBuf {
    let nested = dir.join(TREES_DIR);
    if nested.is_dir() {
        nested
    } else {
        dir.to_path_buf()
    }
}

pub fn run(cfg: &RunConfig, pred: &Path, opts: EvalOptions) -> Result<EvalReport, CliError> {
    cfg.validate()?;
    let load = cfg.load_options()?;
    let docs = cfg.load_documents(&load, SplitName::Test)?;
    let dir = prediction_dir(pred);
    if !dir.is_dir() {
        return Err(CliError::io(format!(
            "prediction directory {} not found",
            dir.display()
        )));
    }
    let mut counts = ParsevalCounts::default();
    let mut relations = RelationCounts::default();
    for doc in &docs {
        let gold = doc.require_gold()?;
        let path = dir.join(format!("{}.tree", doc.id()));
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(CliError::validation(format!(
                    "missing prediction for document {}",
                    doc.id()
                )));
            }
            Err(e) => return Err(CliError::io(format!("{}: {e}", path.display()))),
        };
        let predicted: RstTree = read_tree(text.trim(), doc.edus())
            .map_err(|e| CliError::from(e).context(path.display()))?;
        let c = score_document(&predicted, gold, opts)
            .map_err(|e| CliError::from(e).context(doc.id()))?;
        counts.merge(&c);
        relations.add_document(&predicted, gold, opts)?;
    }
    let scores = micro_f1(&counts)?;
    Ok(EvalReport {
        documents: docs.len(),
        counts,
        scores,
        relations: relations.rows(&load.inventory),
    })
}
