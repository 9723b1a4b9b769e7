//! Fine-grained to canonical relation mapping.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::CorpusError;
use crate::inventory::LabelInventory;
use crate::nary::NaryTree;

const RST_DT_COARSE: &str = include_str!("../../data/relmaps/rst-dt-coarse.map");
const GUM_TO_RST_DT: &str = include_str!("../../data/relmaps/gum-to-rst-dt.map");

/// Lowercases, trims and strips the embedded-unit `-e` suffix.
pub fn normalize_relation(name: &str) -> String {
    let lower = name.trim().to_lowercase();
    match lower.strip_suffix("-e") {
        Some(base) if !base.is_empty() => base.to_string(),
        _ => lower,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationMap {
    entries: BTreeMap<String, String>,
}

impl RelationMap {
    /// Parses `source<TAB>target` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, CorpusError> {
        let mut entries = BTreeMap::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (src, dst) = line.split_once('\t').ok_or_else(|| CorpusError::Syntax {
                line: no + 1,
                col: 1,
                msg: "relation map lines are `source<TAB>target`".into(),
            })?;
            entries.insert(normalize_relation(src), dst.trim().to_string());
        }
        Ok(RelationMap { entries })
    }

    /// Maps every inventory relation to itself (case-insensitively).
    pub fn identity(inventory: &LabelInventory) -> Self {
        let entries = inventory
            .relations()
            .iter()
            .map(|r| (normalize_relation(r.as_str()), r.to_string()))
            .collect();
        RelationMap { entries }
    }

    /// `rst-dt-coarse`, `gum-to-rst-dt`, or `identity:<inventory>`.
    pub fn builtin(id: &str) -> Result<Self, CorpusError> {
        match id {
            "rst-dt-coarse" => Self::parse(RST_DT_COARSE),
            "gum-to-rst-dt" => Self::parse(GUM_TO_RST_DT),
            other => match other.strip_prefix("identity:") {
                Some(inv) => Ok(Self::identity(&LabelInventory::builtin(inv)?)),
                None => Err(CorpusError::Config(format!(
                    "unknown relation map `{other}`"
                ))),
            },
        }
    }

    /// A built-in id, or a path to a map file.
    pub fn load(spec: &str) -> Result<Self, CorpusError> {
        let path = Path::new(spec);
        if path.is_file() {
            Self::parse(&fs::read_to_string(path)?)
        } else {
            Self::builtin(spec)
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Looks up a name; canonical target names also map to themselves.
    pub fn get(&self, name: &str) -> Option<&str> {
        let key = normalize_relation(name);
        self.entries.get(&key).map(String::as_str).or_else(|| {
            self.entries
                .values()
                .find(|t| t.eq_ignore_ascii_case(name.trim()))
                .map(String::as_str)
        })
    }

    pub fn targets(&self) -> std::collections::BTreeSet<&str> {
        self.entries.values().map(String::as_str).collect()
    }

    /// Fails if some target is outside `inventory`.
    pub fn check_targets(&self, inventory: &LabelInventory) -> Result<(), CorpusError> {
        for target in self.targets() {
            if inventory.find(target).is_none() {
                return Err(CorpusError::Config(format!(
                    "relation map target `{target}` is not in inventory `{}`",
                    inventory.id()
                )));
            }
        }
        Ok(())
    }
}

/// Replaces every rel2par in `tree` with its canonical target.
pub fn apply_relation_map(
    tree: &NaryTree,
    map: &RelationMap,
    document_id: &str,
) -> Result<NaryTree, CorpusError> {
    tree.try_map_relations(&mut |name| {
        map.get(name)
            .map(str::to_string)
            .ok_or_else(|| CorpusError::UnmappedRelation {
                name: name.to_string(),
                document: document_id.to_string(),
            })
    })
}
