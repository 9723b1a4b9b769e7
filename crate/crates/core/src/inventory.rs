//! Closed relation label sets per corpus.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::tree::{Nuclearity, Relation};

#[derive(Debug, Error)]
pub enum InventoryError {
    #[error("inventory line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("inventory `{0}` has no relations")]
    Empty(String),
    #[error("inventory `{id}` lists `{name}` twice")]
    Duplicate { id: String, name: String },
    #[error("relation name `{0}` must be non-empty without whitespace or parentheses")]
    BadName(String),
    #[error("default relation `{0}` is not in the inventory")]
    BadDefault(String),
    #[error("unknown built-in inventory `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

const RST_DT: &str = include_str!("../data/inventories/rst-dt.txt");
const INSTR_DT: &str = include_str!("../data/inventories/instr-dt.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelInventory {
    id: String,
    relations: Vec<Relation>,
    default_relation: Relation,
    default_nuclearity: Nuclearity,
}

impl LabelInventory {
    pub fn new(
        id: impl Into<String>,
        relations: Vec<Relation>,
        default_relation: &str,
    ) -> Result<Self, InventoryError> {
        let id = id.into();
        if relations.is_empty() {
            return Err(InventoryError::Empty(id));
        }
        let mut seen = HashSet::new();
        for r in &relations {
            let name = r.as_str();
            if name.is_empty()
                || name
                    .chars()
                    .any(|c| c.is_whitespace() || c == '(' || c == ')')
            {
                return Err(InventoryError::BadName(name.to_string()));
            }
            if !seen.insert(r.as_str().to_lowercase()) {
                return Err(InventoryError::Duplicate {
                    id,
                    name: r.to_string(),
                });
            }
        }
        let default_relation = relations
            .iter()
            .find(|r| r.as_str() == default_relation)
            .cloned()
            .ok_or_else(|| InventoryError::BadDefault(default_relation.to_string()))?;
        Ok(LabelInventory {
            id,
            relations,
            default_relation,
            default_nuclearity: Nuclearity::NucleusSatellite,
        })
    }

    /// Built-in inventories: `rst-dt` (18 coarse classes, also used for GUM) and `instr-dt` (39).
    pub fn builtin(id: &str) -> Result<Self, InventoryError> {
        match id {
            "rst-dt" | "gum" => Self::parse(RST_DT),
            "instr-dt" => Self::parse(INSTR_DT),
            other => Err(InventoryError::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn rst_dt() -> Self {
        Self::builtin("rst-dt").expect("bundled inventory is valid")
    }

    pub fn instr_dt() -> Self {
        Self::builtin("instr-dt").expect("bundled inventory is valid")
    }

    /// Loads a built-in id, or a file path when `spec` names an existing file.
    pub fn load(spec: &str) -> Result<Self, InventoryError> {
        let path = Path::new(spec);
        if path.is_file() {
            Self::parse(&fs::read_to_string(path)?)
        } else {
            Self::builtin(spec)
        }
    }

    /// Parses the `key<TAB>value` inventory format (`id`, `default`, `relation` keys; `#` comments).
    pub fn parse(text: &str) -> Result<Self, InventoryError> {
        let mut id = None;
        let mut default = None;
        let mut relations = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('\t')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| InventoryError::Syntax {
                    line: no + 1,
                    msg: "expected `key<TAB>value`".into(),
                })?;
            match key {
                "id" => id = Some(value.to_string()),
                "default" => default = Some(value.to_string()),
                "relation" => relations.push(Relation::new(value)),
                other => {
                    return Err(InventoryError::Syntax {
                        line: no + 1,
                        msg: format!("unknown key `{other}`"),
                    })
                }
            }
        }
        let id = id.ok_or(InventoryError::Syntax {
            line: 0,
            msg: "missing `id`".into(),
        })?;
        let default = default.ok_or(InventoryError::Syntax {
            line: 0,
            msg: "missing `default`".into(),
        })?;
        Self::new(id, relations, &default)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn default_relation(&self) -> &Relation {
        &self.default_relation
    }

    pub fn default_nuclearity(&self) -> Nuclearity {
        self.default_nuclearity
    }

    /// Case-insensitive lookup returning the canonical spelling.
    pub fn find(&self, name: &str) -> Option<&Relation> {
        self.relations
            .iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(name.trim()))
    }

    pub fn contains(&self, rel: &Relation) -> bool {
        self.relations.iter().any(|r| r == rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_sizes() {
        let rst = LabelInventory::rst_dt();
        assert_eq!(rst.len(), 18);
        assert_eq!(rst.default_relation().as_str(), "Elaboration");
        assert_eq!(rst.default_nuclearity(), Nuclearity::NucleusSatellite);
        assert_eq!(LabelInventory::instr_dt().len(), 39);
        assert_eq!(LabelInventory::builtin("gum").unwrap(), rst);
    }

    #[test]
    fn lookup_is_case_insensitive() {
        let rst = LabelInventory::rst_dt();
        assert_eq!(rst.find(" manner-means ").unwrap().as_str(), "Manner-Means");
        assert!(rst.find("elaboration-of-sorts").is_none());
    }

    #[test]
    fn invalid_inventories() {
        assert!(matches!(
            LabelInventory::new("x", vec![], "A"),
            Err(InventoryError::Empty(_))
        ));
        assert!(matches!(
            LabelInventory::new("x", vec![Relation::new("A"), Relation::new("a")], "A"),
            Err(InventoryError::Duplicate { .. })
        ));
        assert!(matches!(
            LabelInventory::new("x", vec![Relation::new("A")], "B"),
            Err(InventoryError::BadDefault(_))
        ));
        assert!(matches!(
            LabelInventory::new("x", vec![Relation::new("Cause (result)")], "Cause (result)"),
            Err(InventoryError::BadName(_))
        ));
        assert!(LabelInventory::parse("id\tx\nrelation A\n").is_err());
    }
}
