//! Oracle construction from a run configuration.

use std::collections::BTreeMap;
use std::sync::Arc;

use rstprompt::corpus::Document;
use rstprompt::derive::{derive_shift_reduce_sequence, derive_split_sequence};
use rstprompt::engine::Strategy;
use rstprompt::oracle::{
    CacheStats, CachedOracle, HttpOracle, HttpOracleConfig, Oracle, OracleError, OracleQuery,
    RandomOracle, ReplayOracle, ScriptedOracle,
};
use rstprompt::prompt::PromptKind;

use crate::config::{HttpSpec, OracleSpec, RunConfig};
use crate::error::CliError;

/// Sends each prompt kind to its own oracle, e.g. one fine-tuned adapter per subtask.
pub struct KindRouter {
    routes: BTreeMap<PromptKind, Box<dyn Oracle>>,
    fallback: Option<Box<dyn Oracle>>,
}

impl KindRouter {
    pub fn new(
        routes: BTreeMap<PromptKind, Box<dyn Oracle>>,
        fallback: Option<Box<dyn Oracle>>,
    ) -> Self {
        KindRouter { routes, fallback }
    }
}

impl Oracle for KindRouter {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        match self.routes.get(&query.kind).or(self.fallback.as_ref()) {
            Some(o) => o.complete(query),
            None => Err(OracleError::Config(format!(
                "no oracle for {} prompts",
                query.kind
            ))),
        }
    }

    fn fingerprint(&self) -> String {
        let mut parts: Vec<String> = self
            .routes
            .iter()
            .map(|(k, o)| format!("{k}={}", o.fingerprint()))
            .collect();
        if let Some(f) = &self.fallback {
            parts.push(format!("default={}", f.fingerprint()));
        }
        format!("route[{}]", parts.join(";"))
    }
}

fn http_oracle(h: &HttpSpec, model: &str) -> Result<Box<dyn Oracle>, CliError> {
    let endpoint = h
        .endpoint
        .as_deref()
        .ok_or_else(|| CliError::config("the http oracle needs an endpoint"))?;
    let mut c = HttpOracleConfig::new(endpoint, model);
    c.max_tokens = h.max_tokens;
    c.temperature = h.temperature;
    c.timeout_secs = h.timeout_secs;
    c.retry = h.retry.clone();
    Ok(Box::new(HttpOracle::new(c)?))
}

fn shared_oracle(spec: &OracleSpec) -> Result<Box<dyn Oracle>, CliError> {
    match spec {
        OracleSpec::Replay => unreachable!("replay oracles are built per document"),
        OracleSpec::Scripted { answer } => Ok(Box::new(ScriptedOracle::constant(answer))),
        OracleSpec::Random { seed } => Ok(Box::new(RandomOracle::new(*seed))),
        OracleSpec::Http(h) => {
            if h.models.is_empty() {
                let model = h
                    .model
                    .as_deref()
                    .ok_or_else(|| CliError::config("the http oracle needs a model id"))?;
                return http_oracle(h, model);
            }
            let mut routes = BTreeMap::new();
            for (kind, model) in &h.models {
                routes.insert(*kind, http_oracle(h, model)?);
            }
            let fallback = h.model.as_deref().map(|m| http_oracle(h, m)).transpose()?;
            Ok(Box::new(KindRouter::new(routes, fallback)))
        }
    }
}

/// Where each document's answers come from.
pub enum OracleSource {
    Replay {
        strategy: Strategy,
        skip_forced: bool,
    },
    Shared {
        oracle: Arc<dyn Oracle>,
        cache: Option<Arc<CachedOracle<Box<dyn Oracle>>>>,
    },
}

impl OracleSource {
    pub fn build(cfg: &RunConfig) -> Result<Self, CliError> {
        if cfg.oracle == OracleSpec::Replay {
            return Ok(OracleSource::Replay {
                strategy: cfg.strategy,
                skip_forced: cfg.skip_forced,
            });
        }
        let inner = shared_oracle(&cfg.oracle)?;
        Ok(match &cfg.cache {
            Some(dir) => {
                let cached = Arc::new(CachedOracle::new(inner, dir)?);
                OracleSource::Shared {
                    oracle: cached.clone(),
                    cache: Some(cached),
                }
            }
            None => OracleSource::Shared {
                oracle: Arc::from(inner),
                cache: None,
            },
        })
    }

    pub fn for_document(&self, doc: &Document) -> Result<Arc<dyn Oracle>, CliError> {
        match self {
            OracleSource::Replay {
                strategy,
                skip_forced,
            } => {
                let gold = doc.require_gold()?;
                let replay = match strategy {
                    Strategy::BottomUp => {
                        ReplayOracle::bottom_up(&derive_shift_reduce_sequence(gold), *skip_forced)
                    }
                    Strategy::TopDown => {
                        ReplayOracle::top_down(&derive_split_sequence(gold), *skip_forced)
                    }
                };
                Ok(Arc::new(replay))
            }
            OracleSource::Shared { oracle, .. } => Ok(oracle.clone()),
        }
    }

    pub fn fingerprint(&self) -> String {
        match self {
            OracleSource::Replay { .. } => "replay".into(),
            OracleSource::Shared { oracle, .. } => oracle.fingerprint(),
        }
    }

    pub fn cache_stats(&self) -> Option<CacheStats> {
        match self {
            OracleSource::Shared { cache: Some(c), .. } => Some(c.stats()),
            _ => None,
        }
    }
}
