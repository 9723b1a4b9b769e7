//! Treebank ingestion, relation mapping, persistence and split manifests.

mod bracket;
mod dis;
mod relmap;
mod split;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub use bracket::{read_tree, write_tree};
pub use dis::{clean_edu_text, decode, read_dis, write_dis, Encoding};
pub use relmap::{apply_relation_map, normalize_relation, RelationMap};
pub use split::{load_split, SplitManifest, SplitName, Splits};

use crate::inventory::{InventoryError, LabelInventory};
use crate::nary::{binarize_right_heavy, BinarizeError};
use crate::tree::{check_consecutive, Edu, RstTree, Span, TreeError};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("constituent declares span {declared} but its children cover {found}")]
    InconsistentSpan { declared: Span, found: Span },
    #[error("relation `{name}` in document `{document}` has no mapping")]
    UnmappedRelation { name: String, document: String },
    #[error("document `{0}` not found")]
    MissingDocument(String),
    #[error("document `{0}` appears in more than one split")]
    OverlappingSplits(String),
    #[error("split `{split}` declares {expected} documents but lists {found}")]
    SplitSize {
        split: String,
        expected: usize,
        found: usize,
    },
    #[error("document `{0}` has no gold tree")]
    MissingGoldTree(String),
    #[error("document `{0}` has no EDUs")]
    EmptyDocument(String),
    #[error("document `{document}`: {source}")]
    Binarize {
        document: String,
        #[source]
        source: BinarizeError,
    },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Inventory(#[from] InventoryError),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: Box<CorpusError>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CorpusError {
    fn in_file(self, path: &Path) -> Self {
        match self {
            CorpusError::File { .. } => self,
            other => CorpusError::File {
                path: path.to_path_buf(),
                source: Box::new(other),
            },
        }
    }
}

/// A document with gold EDU segmentation and, when annotated, its binary gold tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    id: String,
    edus: Vec<Edu>,
    gold: Option<RstTree>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        edus: Vec<Edu>,
        gold: Option<RstTree>,
    ) -> Result<Self, CorpusError> {
        let id = id.into();
        if edus.is_empty() {
            return Err(CorpusError::EmptyDocument(id));
        }
        check_consecutive(&edus)?;
        if let Some(tree) = &gold {
            tree.validate()?;
            let leaves = tree.leaves();
            if leaves.len() != edus.len() || leaves.iter().zip(&edus).any(|(a, b)| *a != b) {
                return Err(CorpusError::Config(format!(
                    "gold tree of `{id}` does not span its EDUs"
                )));
            }
        }
        Ok(Document { id, edus, gold })
    }

    /// Builds a gold-annotated document from a tree.
    pub fn from_tree(id: impl Into<String>, tree: RstTree) -> Result<Self, CorpusError> {
        let edus = tree.leaves().into_iter().cloned().collect();
        Self::new(id, edus, Some(tree))
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn edus(&self) -> &[Edu] {
        &self.edus
    }

    pub fn len(&self) -> usize {
        self.edus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edus.is_empty()
    }

    pub fn gold(&self) -> Option<&RstTree> {
        self.gold.as_ref()
    }

    pub fn require_gold(&self) -> Result<&RstTree, CorpusError> {
        self.gold
            .as_ref()
            .ok_or_else(|| CorpusError::MissingGoldTree(self.id.clone()))
    }
}

/// How treebank files are turned into documents.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub inventory: LabelInventory,
    pub relation_map: RelationMap,
    pub encoding: Encoding,
}

impl LoadOptions {
    pub fn new(inventory: LabelInventory, relation_map: RelationMap) -> Self {
        LoadOptions {
            inventory,
            relation_map,
            encoding: Encoding::Auto,
        }
    }
}

/// Document id for a corpus file: the file name up to its first `.`.
pub fn document_id(path: &Path) -> String {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    match name.split_once('.') {
        Some((stem, _)) if !stem.is_empty() => stem.to_string(),
        _ => name,
    }
}

/// Reads, relation-maps and binarizes one `.dis` record.
pub fn document_from_dis(id: &str, src: &str, opts: &LoadOptions) -> Result<Document, CorpusError> {
    let (nary, edus) = read_dis(src)?;
    let mapped = apply_relation_map(&nary, &opts.relation_map, id)?;
    let gold =
        binarize_right_heavy(&mapped, &opts.inventory).map_err(|source| CorpusError::Binarize {
            document: id.to_string(),
            source,
        })?;
    Document::new(id, edus, Some(gold))
}

/// Reads an unannotated document: one EDU per non-empty line.
pub fn document_from_edus(id: &str, src: &str) -> Result<Document, CorpusError> {
    let edus = src
        .lines()
        .map(clean_edu_text)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, text)| Edu::new(i + 1, &text))
        .collect::<Result<Vec<_>, _>>()?;
    Document::new(id, edus, None)
}

/// Loads a `.dis` (gold) or `.edus` (unannotated) file.
pub fn load_document(path: &Path, opts: &LoadOptions) -> Result<Document, CorpusError> {
    let run = || {
        let bytes = fs::read(path)?;
        let src = decode(&bytes, opts.encoding)?;
        let id = document_id(path);
        if path.extension().is_some_and(|e| e == "edus") {
            document_from_edus(&id, &src)
        } else {
            document_from_dis(&id, &src, opts)
        }
    };
    run().map_err(|e| e.in_file(path))
}

/// Corpus files in `dir` (`*.dis`, `*.edus`), sorted by file name.
pub fn corpus_files(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let mut files = Vec::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        let ext = path.extension().and_then(|e| e.to_str());
        if path.is_file() && matches!(ext, Some("dis") | Some("edus")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Loads every document in `dir`.
pub fn load_corpus(dir: &Path, opts: &LoadOptions) -> Result<Vec<Document>, CorpusError> {
    corpus_files(dir)?
        .iter()
        .map(|p| load_document(p, opts))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nary::NaryTree;
    use crate::tree::Nuclearity;

    const TWO_LEAF: &str = "( Root (span 1 2)
  ( Nucleus (leaf 1) (rel2par span) (text _!it will buy Shaw-Walker Co._!) )
  ( Satellite (leaf 2) (rel2par attribution) (text _!Westinghouse said_!) )
)
";

    fn opts() -> LoadOptions {
        LoadOptions::new(
            LabelInventory::rst_dt(),
            RelationMap::builtin("rst-dt-coarse").unwrap(),
        )
    }

    #[test]
    fn minimal_two_leaf_record() {
        let (tree, edus) = read_dis(TWO_LEAF).unwrap();
        let NaryTree::Node(children) = &tree else {
            panic!("expected node")
        };
        assert_eq!(children.len(), 2);
        assert_eq!(children[1].rel2par, "attribution");
        assert_eq!(edus.len(), 2);
        assert_eq!(edus[1].text(), "Westinghouse said");

        let doc = document_from_dis("tiny", TWO_LEAF, &opts()).unwrap();
        let root = doc.gold().unwrap().as_node().unwrap();
        assert_eq!(root.nuclearity(), Nuclearity::NucleusSatellite);
        assert_eq!(root.relation().as_str(), "Attribution");
    }

    #[test]
    fn writer_round_trips() {
        let (tree, edus) = read_dis(TWO_LEAF).unwrap();
        let written = write_dis(&tree);
        let (again, edus2) = read_dis(&written).unwrap();
        assert_eq!(tree, again);
        assert_eq!(edus, edus2);
    }

    #[test]
    fn inconsistent_span() {
        let src = "( Root (span 1 3)
  ( Nucleus (leaf 1) (rel2par span) (text _!a_!) )
  ( Satellite (leaf 2) (rel2par attribution) (text _!b_!) )
)";
        assert!(matches!(
            read_dis(src),
            Err(CorpusError::InconsistentSpan { .. })
        ));
    }

    #[test]
    fn syntax_errors() {
        let truncated = &TWO_LEAF[..TWO_LEAF.len() - 3];
        assert!(matches!(
            read_dis(truncated),
            Err(CorpusError::Syntax { .. })
        ));
        let no_rel = TWO_LEAF.replace("(rel2par attribution) ", "");
        assert!(matches!(read_dis(&no_rel), Err(CorpusError::Syntax { .. })));
        let no_text = TWO_LEAF.replace("(text _!Westinghouse said_!) ", "");
        assert!(matches!(
            read_dis(&no_text),
            Err(CorpusError::Syntax { .. })
        ));
        assert!(matches!(
            read_dis("( Root (leaf 1) (text _!never closed) )"),
            Err(CorpusError::Syntax { .. })
        ));
        assert!(matches!(
            read_dis(&format!("{TWO_LEAF} )")),
            Err(CorpusError::Syntax { .. })
        ));
    }

    #[test]
    fn text_markup_and_parentheses() {
        let src = "( Root (span 1 2)
  ( Nucleus (leaf 1) (rel2par span) (text _!Sales rose (a lot)\n in  June.<P>_!) )
  ( Satellite (leaf 2) (rel2par Elaboration-additional-e) (text _!\"Yes,\" he said._!) )
)";
        let doc = document_from_dis("x", src, &opts()).unwrap();
        assert_eq!(doc.edus()[0].text(), "Sales rose (a lot) in June.");
        assert_eq!(doc.edus()[1].text(), "\"Yes,\" he said.");
        assert_eq!(
            doc.gold().unwrap().as_node().unwrap().relation().as_str(),
            "Elaboration"
        );
    }

    #[test]
    fn single_edu_document() {
        let doc = document_from_dis("one", "( Root (leaf 1) (text _!Alone._!) )", &opts()).unwrap();
        assert!(doc.gold().unwrap().is_leaf());
    }

    #[test]
    fn unmapped_relation_names_document() {
        let src = TWO_LEAF.replace("attribution", "elaboration-of-sorts");
        match document_from_dis("doc7", &src, &opts()) {
            Err(CorpusError::UnmappedRelation { name, document }) => {
                assert_eq!(name, "elaboration-of-sorts");
                assert_eq!(document, "doc7");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn latin1_decoding() {
        let bytes = b"caf\xe9";
        assert_eq!(decode(bytes, Encoding::Auto).unwrap(), "café");
        assert!(decode(bytes, Encoding::Utf8).is_err());
        assert_eq!(decode("café".as_bytes(), Encoding::Auto).unwrap(), "café");
    }

    #[test]
    fn ids_and_edus_files() {
        assert_eq!(document_id(Path::new("/x/wsj_1100.out.dis")), "wsj_1100");
        let doc = document_from_edus("d", "first unit\n\n second   unit \n").unwrap();
        assert_eq!(doc.len(), 2);
        assert_eq!(doc.edus()[1].text(), "second unit");
        assert!(doc.gold().is_none());
        assert!(matches!(
            document_from_edus("empty", "\n"),
            Err(CorpusError::EmptyDocument(_))
        ));
    }
}
