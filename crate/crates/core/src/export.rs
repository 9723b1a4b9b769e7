//! Fine-tuning data: (prompt, completion) pairs from replayed gold derivations.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, Document};
use crate::derive::{derive_shift_reduce_sequence, derive_split_sequence};
use crate::engine::{parse_document, ParseError, ParseOptions, Strategy};
use crate::inventory::LabelInventory;
use crate::oracle::ReplayOracle;
use crate::prompt::PromptKind;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("document {document}: {source}")]
    Parse {
        document: String,
        #[source]
        source: ParseError,
    },
    #[error("document {0}: replay did not reproduce the gold tree")]
    ReplayDiverged(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub kind: PromptKind,
    pub prompt: String,
    pub completion: String,
    pub document_id: String,
    pub step: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Export {
    pub examples: Vec<TrainingExample>,
    /// Documents with a single EDU; they yield no decisions.
    pub skipped: Vec<String>,
}

impl Export {
    pub fn of_kind(&self, kind: PromptKind) -> impl Iterator<Item = &TrainingExample> {
        self.examples.iter().filter(move |e| e.kind == kind)
    }
}

/// Replays each document's gold derivation and keeps every oracle-visible decision.
pub fn export_training_pairs(
    docs: &[Document],
    strategy: Strategy,
    inventory: &LabelInventory,
    opts: &ParseOptions,
) -> Result<Export, ExportError> {
    let mut out = Export::default();
    for doc in docs {
        let gold = doc.require_gold()?;
        if doc.len() < 2 {
            out.skipped.push(doc.id().to_string());
            continue;
        }
        let oracle = match strategy {
            Strategy::BottomUp => {
                ReplayOracle::bottom_up(&derive_shift_reduce_sequence(gold), opts.skip_forced)
            }
            Strategy::TopDown => {
                ReplayOracle::top_down(&derive_split_sequence(gold), opts.skip_forced)
            }
        };
        let (tree, trace) =
            parse_document(doc, strategy, &oracle, inventory, opts).map_err(|source| {
                ExportError::Parse {
                    document: doc.id().to_string(),
                    source,
                }
            })?;
        if &tree != gold || trace.corrected() > 0 {
            return Err(ExportError::ReplayDiverged(doc.id().to_string()));
        }
        for entry in trace.into_entries() {
            if let (false, Some(prompt)) = (entry.forced, entry.prompt) {
                out.examples.push(TrainingExample {
                    kind: entry.kind,
                    prompt,
                    completion: entry.decision,
                    document_id: doc.id().to_string(),
                    step: entry.step,
                });
            }
        }
    }
    Ok(out)
}

/// Fine-tuning settings recorded next to the exported data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparameters {
    pub epochs: u32,
    pub batch_size: u32,
    pub optimizer: String,
    pub learning_rate: f64,
    pub lr_scheduler: String,
    pub warmup_ratio: f64,
    pub gradient_clipping: f64,
    pub lora_r: u32,
    pub lora_alpha: u32,
    pub lora_dropout: f64,
    pub lora_target_modules: String,
    pub quantization: String,
    pub adapters: String,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            epochs: 5,
            batch_size: 16,
            optimizer: "Adam".into(),
            learning_rate: 2e-4,
            lr_scheduler: "linear warm-up, then cosine annealing to 0".into(),
            warmup_ratio: 0.03,
            gradient_clipping: 1.0,
            lora_r: 64,
            lora_alpha: 16,
            lora_dropout: 0.1,
            lora_target_modules: "all linear layers in transformer blocks".into(),
            quantization: "4-bit NormalFloat with double quantization".into(),
            adapters: "one adapter per subtask".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExportMetadata {
    pub strategy: Strategy,
    pub inventory: String,
    pub relations: Vec<String>,
    pub skip_forced: bool,
    pub max_span_chars: Option<usize>,
    pub documents: usize,
    pub skipped_single_edu: Vec<String>,
    pub examples: BTreeMap<String, usize>,
    pub files: BTreeMap<String, String>,
    pub hyperparameters: Hyperparameters,
}

pub fn export_file_name(strategy: Strategy, kind: PromptKind) -> String {
    format!("{}.{}.jsonl", strategy.as_str(), kind.as_str())
}

pub fn metadata_file_name(strategy: Strategy) -> String {
    format!("{}.meta.json", strategy.as_str())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes one JSONL file per prompt kind of `strategy` plus the metadata sidecar.
pub fn write_export(
    dir: &Path,
    strategy: Strategy,
    export: &Export,
    docs: usize,
    inventory: &LabelInventory,
    opts: &ParseOptions,
) -> Result<Vec<PathBuf>, ExportError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut counts = BTreeMap::new();
    let mut files = BTreeMap::new();
    for kind in strategy.kinds() {
        let mut buf = Vec::new();
        let mut n = 0;
        for ex in export.of_kind(kind) {
            serde_json::to_writer(&mut buf, ex).map_err(std::io::Error::from)?;
            buf.push(b'\n');
            n += 1;
        }
        let name = export_file_name(strategy, kind);
        let path = dir.join(&name);
        write_atomic(&path, &buf)?;
        written.push(path);
        counts.insert(kind.as_str().to_string(), n);
        files.insert(kind.as_str().to_string(), name);
    }
    let meta = ExportMetadata {
        strategy,
        inventory: inventory.id().to_string(),
        relations: inventory
            .relations()
            .iter()
            .map(|r| r.to_string())
            .collect(),
        skip_forced: opts.skip_forced,
        max_span_chars: opts.prompt.max_span_chars,
        documents: docs,
        skipped_single_edu: export.skipped.clone(),
        examples: counts,
        files,
        hyperparameters: Hyperparameters::default(),
    };
    let mut bytes = serde_json::to_vec_pretty(&meta).map_err(std::io::Error::from)?;
    bytes.push(b'\n');
    let path = dir.join(metadata_file_name(strategy));
    write_atomic(&path, &bytes)?;
    written.push(path);
    Ok(written)
}
