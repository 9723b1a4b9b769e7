//! On-disk completion cache.
//!
//! One JSON record per key at `<dir>/<key>.json`. The key is the hex SHA-256 of
//! `"rstprompt-cache-v1\n" + kind + "\n" + fingerprint + "\n" + prompt`, where
//! the fingerprint names the model and decoding parameters. Records are written
//! to a temporary file and linked into place without overwriting, so readers
//! never see a partial record.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Oracle, OracleError, OracleQuery};
use crate::prompt::PromptKind;

const KEY_PREFIX: &str = "rstprompt-cache-v1";

pub fn cache_key(kind: PromptKind, fingerprint: &str, prompt: &str) -> String {
    let mut h = Sha256::new();
    h.update(KEY_PREFIX.as_bytes());
    h.update(b"\n");
    h.update(kind.as_str().as_bytes());
    h.update(b"\n");
    h.update(fingerprint.as_bytes());
    h.update(b"\n");
    h.update(prompt.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Serialize, Deserialize)]
struct Record {
    key: String,
    kind: PromptKind,
    fingerprint: String,
    prompt: String,
    raw: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

pub struct CachedOracle<O> {
    inner: O,
    dir: PathBuf,
    fingerprint: String,
    key_locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

impl<O: Oracle> CachedOracle<O> {
    pub fn new(inner: O, dir: impl Into<PathBuf>) -> Result<Self, OracleError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        let fingerprint = inner.fingerprint();
        Ok(CachedOracle {
            inner,
            dir,
            fingerprint,
            key_locks: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::SeqCst),
            misses: self.misses.load(Ordering::SeqCst),
        }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    fn record_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    fn lock_for(&self, key: &str) -> Arc<Mutex<()>> {
        let mut locks = self.key_locks.lock().expect("cache lock table poisoned");
        locks.entry(key.to_string()).or_default().clone()
    }

    fn read_record(
        &self,
        path: &Path,
        key: &str,
        query: &OracleQuery,
    ) -> Result<Option<String>, OracleError> {
        let bytes = match fs::read(path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let corrupt = |message: String| OracleError::StoreCorrupt {
            path: path.to_path_buf(),
            message,
        };
        let record: Record = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
        if record.key != key
            || record.kind != query.kind
            || record.fingerprint != self.fingerprint
            || record.prompt != query.prompt
        {
            return Err(corrupt("record does not match its key".into()));
        }
        Ok(Some(record.raw))
    }

    fn write_record(&self, path: &Path, record: &Record) -> Result<(), OracleError> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer(&mut tmp, record).map_err(std::io::Error::from)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        match tmp.persist_noclobber(path) {
            Ok(_) => Ok(()),
            // another process stored the same key first
            Err(e) if e.error.kind() == std::io::ErrorKind::AlreadyExists => Ok(()),
            Err(e) => Err(e.error.into()),
        }
    }
}

impl<O: Oracle> Oracle for CachedOracle<O> {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        let key = cache_key(query.kind, &self.fingerprint, &query.prompt);
        let path = self.record_path(&key);
        let lock = self.lock_for(&key);
        let _guard = lock.lock().expect("cache key lock poisoned");
        if let Some(raw) = self.read_record(&path, &key, query)? {
            self.hits.fetch_add(1, Ordering::SeqCst);
            return Ok(raw);
        }
        self.misses.fetch_add(1, Ordering::SeqCst);
        let raw = self.inner.complete(query)?;
        let record = Record {
            key,
            kind: query.kind,
            fingerprint: self.fingerprint.clone(),
            prompt: query.prompt.clone(),
            raw: raw.clone(),
        };
        self.write_record(&path, &record)?;
        Ok(raw)
    }

    fn fingerprint(&self) -> String {
        self.fingerprint.clone()
    }
}
