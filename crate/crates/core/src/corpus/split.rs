//! Train/dev/test split manifests.
//!
//! One `split<TAB>document_id` per line. `@expect<TAB>split<TAB>count` declares
//! an expected size for a split; `#` starts a comment line.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::path::Path;

use super::{corpus_files, document_id, load_document, CorpusError, Document, LoadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SplitName {
    Train,
    Dev,
    Test,
}

impl SplitName {
    pub const ALL: [SplitName; 3] = [SplitName::Train, SplitName::Dev, SplitName::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            SplitName::Train => "train",
            SplitName::Dev => "dev",
            SplitName::Test => "test",
        }
    }
}

impl fmt::Display for SplitName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SplitName {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(SplitName::Train),
            "dev" => Ok(SplitName::Dev),
            "test" => Ok(SplitName::Test),
            other => Err(CorpusError::Config(format!("unknown split `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitManifest {
    pub ids: BTreeMap<SplitName, Vec<String>>,
    pub expected: BTreeMap<SplitName, usize>,
}

impl SplitManifest {
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut manifest = SplitManifest::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            let bad = |msg: &str| CorpusError::Syntax {
                line: no + 1,
                col: 1,
                msg: msg.to_string(),
            };
            match fields.as_slice() {
                ["@expect", split, count] => {
                    let count = count.parse().map_err(|_| bad("bad expected count"))?;
                    manifest.expected.insert(split.parse()?, count);
                }
                [split, id] if !split.starts_with('@') => {
                    manifest
                        .ids
                        .entry(split.parse()?)
                        .or_default()
                        .push(id.to_string());
                }
                _ => return Err(bad("expected `split<TAB>document_id`")),
            }
        }
        Ok(manifest)
    }

    pub fn read(path: &Path) -> Result<Self, CorpusError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn ids(&self, split: SplitName) -> &[String] {
        self.ids.get(&split).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks disjointness and any declared sizes.
    pub fn validate(&self) -> Result<(), CorpusError> {
        let mut owner: HashMap<&str, SplitName> = HashMap::new();
        for (split, ids) in &self.ids {
            for id in ids {
                if owner.insert(id, *split).is_some() {
                    return Err(CorpusError::OverlappingSplits(id.clone()));
                }
            }
        }
        for (split, expected) in &self.expected {
            let found = self.ids(*split).len();
            if found != *expected {
                return Err(CorpusError::SplitSize {
                    split: split.to_string(),
                    expected: *expected,
                    found,
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct Splits {
    pub train: Vec<Document>,
    pub dev: Vec<Document>,
    pub test: Vec<Document>,
}

impl Splits {
    pub fn get(&self, split: SplitName) -> &[Document] {
        match split {
            SplitName::Train => &self.train,
            SplitName::Dev => &self.dev,
            SplitName::Test => &self.test,
        }
    }
}

/// Loads the documents a manifest names from `corpus_dir`.
pub fn load_split(
    manifest: &Path,
    corpus_dir: &Path,
    opts: &LoadOptions,
) -> Result<Splits, CorpusError> {
    let manifest = SplitManifest::read(manifest)?;
    manifest.validate()?;
    let files: HashMap<String, std::path::PathBuf> = corpus_files(corpus_dir)?
        .into_iter()
        .map(|p| (document_id(&p), p))
        .collect();
    let mut splits = Splits::default();
    for split in SplitName::ALL {
        let mut docs = Vec::new();
        for id in manifest.ids(split) {
            let path = files
                .get(id)
                .ok_or_else(|| CorpusError::MissingDocument(id.clone()))?;
            docs.push(load_document(path, opts)?);
        }
        match split {
            SplitName::Train => splits.train = docs,
            SplitName::Dev => splits.dev = docs,
            SplitName::Test => splits.test = docs,
        }
    }
    Ok(splits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_sizes_validate() {
        let mut text = String::from("@expect\ttrain\t307\n@expect\tdev\t40\n@expect\ttest\t38\n");
        for i in 0..307 {
            text.push_str(&format!("train\twsj_{i:04}\n"));
        }
        for i in 307..347 {
            text.push_str(&format!("dev\twsj_{i:04}\n"));
        }
        for i in 347..385 {
            text.push_str(&format!("test\twsj_{i:04}\n"));
        }
        let m = SplitManifest::parse(&text).unwrap();
        m.validate().unwrap();
        assert_eq!(
            m.ids(SplitName::Train).len() + m.ids(SplitName::Dev).len(),
            347
        );
        assert_eq!(m.ids(SplitName::Test).len(), 38);
    }

    #[test]
    fn size_mismatch() {
        let m = SplitManifest::parse("@expect\ttest\t2\ntest\ta\n").unwrap();
        assert!(matches!(
            m.validate(),
            Err(CorpusError::SplitSize {
                expected: 2,
                found: 1,
                ..
            })
        ));
    }

    #[test]
    fn overlapping_ids() {
        let m = SplitManifest::parse("train\ta\ntest\ta\n").unwrap();
        assert!(matches!(m.validate(), Err(CorpusError::OverlappingSplits(id)) if id == "a"));
    }

    #[test]
    fn empty_dev_without_declaration() {
        let m = SplitManifest::parse("# comment\ntrain\ta\ntest\tb\n").unwrap();
        m.validate().unwrap();
        assert!(m.ids(SplitName::Dev).is_empty());
    }

    #[test]
    fn unknown_split_rejected() {
        assert!(SplitManifest::parse("holdout\ta\n").is_err());
        assert!(SplitManifest::parse("train a\n").is_err());
    }
}
