//! `export-training`: fine-tuning files per strategy and prompt kind.

use std::path::PathBuf;

use rstprompt::corpus::SplitName;
use rstprompt::engine::Strategy;
use rstprompt::export::{export_training_pairs, write_export};

use super::prepare_output;
use crate::config::RunConfig;
use crate::error::CliError;

pub fn run(cfg: &RunConfig, strategies: &[Strategy]) -> Result<Vec<PathBuf>, CliError> {
    cfg.validate()?;
    let load = cfg.load_options()?;
    let docs = cfg.load_documents(&load, SplitName::Train)?;
    let out = prepare_output(cfg)?;
    let opts = cfg.parse_options();
    let mut written = Vec::new();
    for &strategy in strategies {
        let export = export_training_pairs(&docs, strategy, &load.inventory, &opts)?;
        if !export.skipped.is_empty() {
            log::info!(
                "{strategy}: skipped single-EDU documents {:?}",
                export.skipped
            );
        }
        written.extend(write_export(
            out,
            strategy,
            &export,
            docs.len(),
            &load.inventory,
            &opts,
        )?);
    }
    Ok(written)
}
