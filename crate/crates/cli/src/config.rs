//! Run configuration: TOML file, command-line overrides, validation and hashing.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rstprompt::corpus::Document;
use rstprompt::corpus::{load_corpus, load_split, LoadOptions, RelationMap, SplitName};
use rstprompt::engine::{ParseOptions, Strategy};
use rstprompt::inventory::LabelInventory;
use rstprompt::oracle::RetryPolicy;
use rstprompt::prompt::{PromptConfig, PromptKind};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const MAX_WORKERS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub strategy: Strategy,
    /// Built-in inventory id (`rst-dt`, `instr-dt`, `gum`) or a path to an inventory file.
    pub inventory: String,
    /// Built-in map id or a path; unset picks the usual map for the inventory.
    pub relation_map: Option<String>,
    pub corpus: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub split: Option<String>,
    pub output: Option<PathBuf>,
    pub skip_forced: bool,
    pub max_span_chars: Option<usize>,
    pub workers: usize,
    pub cache: Option<PathBuf>,
    pub oracle: OracleSpec,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            strategy: Strategy::BottomUp,
            inventory: "rst-dt".into(),
            relation_map: None,
            corpus: None,
            manifest: None,
            split: None,
            output: None,
            skip_forced: true,
            max_span_chars: None,
            workers: 4,
            cache: None,
            oracle: OracleSpec::Replay,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OracleSpec {
    /// Gold decisions of each document.
    Replay,
    /// The same completion for every prompt.
    Scripted {
        answer: String,
    },
    /// Seeded adversarial completions.
    Random {
        seed: u64,
    },
    Http(HttpSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HttpSpec {
    pub endpoint: Option<String>,
    /// Model id used for prompt kinds without an entry in `models`.
    pub model: Option<String>,
    pub max_tokens: u32,
    pub temperature: f64,
    pub timeout_secs: u64,
    /// Per prompt kind model ids (one adapter per subtask).
    pub models: BTreeMap<PromptKind, String>,
    pub retry: RetryPolicy,
}

impl Default for HttpSpec {
    fn default() -> Self {
        HttpSpec {
            endpoint: None,
            model: None,
            max_tokens: 16,
            temperature: 0.0,
            timeout_secs: 60,
            models: BTreeMap::new(),
            retry: RetryPolicy::default(),
        }
    }
}

/// Parses `replay`, `http`, `scripted:<answer>` or `random:<seed>`.
pub fn parse_oracle_flag(s: &str) -> Result<OracleSpec, String> {
    match s.split_once(':') {
        None if s == "replay" => Ok(OracleSpec::Replay),
        None if s == "http" => Ok(OracleSpec::Http(HttpSpec::default())),
        Some(("scripted", answer)) => Ok(OracleSpec::Scripted {
            answer: answer.to_string(),
        }),
        Some(("random", seed)) => seed
            .parse()
            .map(|seed| OracleSpec::Random { seed })
            .map_err(|_| format!("random oracle seed `{seed}` is not an integer")),
        _ => Err(format!(
            "unknown oracle `{s}` (replay, http, scripted:<answer>, random:<seed>)"
        )),
    }
}

/// Command-line values that replace configuration-file values when present.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub strategy: Option<Strategy>,
    pub inventory: Option<String>,
    pub relation_map: Option<String>,
    pub corpus: Option<PathBuf>,
    pub manifest: Option<PathBuf>,
    pub split: Option<String>,
    pub output: Option<PathBuf>,
    pub query_forced: bool,
    pub max_span_chars: Option<usize>,
    pub workers: Option<usize>,
    pub cache: Option<PathBuf>,
    pub oracle: Option<OracleSpec>,
    pub endpoint: Option<String>,
    pub model: Option<String>,
    pub models: Vec<(PromptKind, String)>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::config(format!("configuration: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| e.context(path.display()))
    }

    /// Configuration file (or defaults) with `o` applied on top.
    pub fn resolve(file: Option<&Path>, o: &Overrides) -> Result<Self, CliError> {
        let mut c = match file {
            Some(p) => Self::read(p)?,
            None => RunConfig::default(),
        };
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &o.$field {
                    c.$field = v.clone().into();
                }
            };
        }
        set!(strategy);
        set!(inventory);
        set!(relation_map);
        set!(corpus);
        set!(manifest);
        set!(split);
        set!(output);
        set!(max_span_chars);
        set!(workers);
        set!(cache);
        if o.query_forced {
            c.skip_forced = false;
        }
        if let Some(spec) = &o.oracle {
            // keep file settings (retry, models) when the flag names the same kind
            let same_kind = matches!(
                (&c.oracle, spec),
                (OracleSpec::Http(_), OracleSpec::Http(_))
            );
            if !same_kind {
                c.oracle = spec.clone();
            }
        }
        if o.endpoint.is_some() || o.model.is_some() || !o.models.is_empty() {
            let OracleSpec::Http(h) = &mut c.oracle else {
                return Err(CliError::config(
                    "--endpoint and --model require the http oracle",
                ));
            };
            if let Some(e) = &o.endpoint {
                h.endpoint = Some(e.clone());
            }
            if let Some(m) = &o.model {
                h.model = Some(m.clone());
            }
            for (k, m) in &o.models {
                h.models.insert(*k, m.clone());
            }
        }
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.workers == 0 || self.workers > MAX_WORKERS {
            return Err(CliError::config(format!(
                "workers must be between 1 and {MAX_WORKERS}"
            )));
        }
        if self.max_span_chars == Some(0) {
            return Err(CliError::config("max_span_chars must be positive"));
        }
        if self.split.is_some() && self.manifest.is_none() {
            return Err(CliError::config("a split needs a split manifest"));
        }
        if let Some(s) = &self.split {
            s.parse::<SplitName>()?;
        }
        if let OracleSpec::Http(h) = &self.oracle {
            if h.endpoint.as_deref().is_none_or(|e| e.trim().is_empty()) {
                return Err(CliError::config("the http oracle needs an endpoint"));
            }
            for kind in self.strategy.kinds() {
                if !h.models.contains_key(&kind) && h.model.is_none() {
                    return Err(CliError::config(format!("no model id for {kind} prompts")));
                }
            }
        }
        if self.cache.is_some() && self.oracle == OracleSpec::Replay {
            return Err(CliError::config("the replay oracle cannot be cached"));
        }
        Ok(())
    }

    pub fn parse_options(&self) -> ParseOptions {
        ParseOptions {
            skip_forced: self.skip_forced,
            prompt: PromptConfig {
                max_span_chars: self.max_span_chars,
            },
        }
    }

    pub fn load_inventory(&self) -> Result<LabelInventory, CliError> {
        Ok(LabelInventory::load(&self.inventory)?)
    }

    pub fn load_relation_map(&self, inventory: &LabelInventory) -> Result<RelationMap, CliError> {
        let map = match (&self.relation_map, self.inventory.as_str()) {
            (Some(spec), _) => RelationMap::load(spec)?,
            (None, "rst-dt") => RelationMap::builtin("rst-dt-coarse")?,
            (None, "gum") => RelationMap::builtin("gum-to-rst-dt")?,
            (None, _) => RelationMap::identity(inventory),
        };
        map.check_targets(inventory)?;
        Ok(map)
    }

    pub fn load_options(&self) -> Result<LoadOptions, CliError> {
        let inventory = self.load_inventory()?;
        let map = self.load_relation_map(&inventory)?;
        Ok(LoadOptions::new(inventory, map))
    }

    pub fn require_output(&self) -> Result<&Path, CliError> {
        self.output
            .as_deref()
            .ok_or_else(|| CliError::config("an output directory is required"))
    }

    /// Documents of the configured corpus, or of one split when a manifest is given.
    pub fn load_documents(
        &self,
        opts: &LoadOptions,
        default_split: SplitName,
    ) -> Result<Vec<Document>, CliError> {
        let corpus = self
            .corpus
            .as_deref()
            .ok_or_else(|| CliError::config("a corpus directory is required"))?;
        match &self.manifest {
            Some(manifest) => {
                let split = match &self.split {
                    Some(s) => s.parse()?,
                    None => default_split,
                };
                let splits = load_split(manifest, corpus, opts)?;
                Ok(splits.get(split).to_vec())
            }
            None => Ok(load_corpus(corpus, opts)?),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes to TOML")
    }

    /// Hash of the settings that determine run outputs; the output location and worker count are left out.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.output = None;
        c.workers = 0;
        let json = serde_json::to_vec(&c).expect("configuration serializes to JSON");
        hex::encode(Sha256::digest(&json))
    }
}
