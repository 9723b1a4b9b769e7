//! Command-line syntax.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rstprompt::engine::Strategy;
use rstprompt::prompt::PromptKind;

use crate::config::{parse_oracle_flag, OracleSpec, Overrides};

#[derive(Debug, Parser)]
#[command(
    name = "rstprompt",
    version,
    about = "RST discourse parsing with prompted completion models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Parse a corpus and write one tree and one trace per document.
    Parse(ParseArgs),
    /// Score predicted trees against gold with Standard-Parseval.
    Eval(EvalArgs),
    /// Write (prompt, completion) fine-tuning files from gold trees.
    ExportTraining(ExportArgs),
    /// Write the gold decision sequence of each document as a trace.
    DeriveActions(DeriveArgs),
    /// Per-relation F1 table of predicted trees against gold.
    ReportRelations(EvalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory of `.dis` (gold) or `.edus` (one EDU per line) files.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Split manifest selecting documents from the corpus.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// train, dev or test.
    #[arg(long)]
    pub split: Option<String>,
    /// rst-dt, instr-dt, gum, or an inventory file.
    #[arg(long)]
    pub inventory: Option<String>,
    /// Built-in relation map id or a map file.
    #[arg(long)]
    pub relation_map: Option<String>,
}

impl CorpusArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            corpus: self.corpus.clone(),
            manifest: self.manifest.clone(),
            split: self.split.clone(),
            inventory: self.inventory.clone(),
            relation_map: self.relation_map.clone(),
            ..Overrides::default()
        }
    }
}

fn parse_kind_model(s: &str) -> Result<(PromptKind, String), String> {
    let (kind, model) = s
        .split_once('=')
        .ok_or_else(|| format!("expected KIND=MODEL, got `{s}`"))?;
    Ok((kind.parse()?, model.to_string()))
}

#[derive(Debug, Clone, Args)]
pub struct ParseArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    /// replay, http, scripted:<answer> or random:<seed>.
    #[arg(long, value_parser = parse_oracle_flag)]
    pub oracle: Option<OracleSpec>,
    /// Completions endpoint URL for the http oracle.
    #[arg(long)]
    pub endpoint: Option<String>,
    /// Model id for the http oracle.
    #[arg(long)]
    pub model: Option<String>,
    /// Model id for one prompt kind, e.g. `relation=my-relation-adapter`.
    #[arg(long = "model-for", value_parser = parse_kind_model)]
    pub model_for: Vec<(PromptKind, String)>,
    /// Completion cache directory.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Ask the oracle even when only one move is possible.
    #[arg(long)]
    pub query_forced: bool,
    /// Center-elide span texts longer than this many characters.
    #[arg(long)]
    pub max_span_chars: Option<usize>,
    /// Documents parsed concurrently.
    #[arg(long)]
    pub workers: Option<usize>,
}

impl ParseArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            output: self.out.clone(),
            strategy: self.strategy,
            oracle: self.oracle.clone(),
            endpoint: self.endpoint.clone(),
            model: self.model.clone(),
            models: self.model_for.clone(),
            cache: self.cache.clone(),
            query_forced: self.query_forced,
            max_span_chars: self.max_span_chars,
            workers: self.workers,
            ..self.corpus.overrides()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Directory of `<doc>.tree` files, or a `parse` output directory.
    #[arg(long)]
    pub pred: PathBuf,
    /// Leave the root node out of the scored spans.
    #[arg(long)]
    pub exclude_root: bool,
    /// Write comma-separated scores here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write the per-relation table as comma-separated records here.
    #[arg(long)]
    pub relations_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Only this strategy; both are exported by default.
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub query_forced: bool,
    #[arg(long)]
    pub max_span_chars: Option<usize>,
}

impl ExportArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            output: self.out.clone(),
            strategy: self.strategy,
            query_forced: self.query_forced,
            max_span_chars: self.max_span_chars,
            ..self.corpus.overrides()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct DeriveArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub strategy: Option<Strategy>,
    #[arg(long)]
    pub query_forced: bool,
}

impl DeriveArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            output: self.out.clone(),
            strategy: self.strategy,
            query_forced: self.query_forced,
            ..self.corpus.overrides()
        }
    }
}
