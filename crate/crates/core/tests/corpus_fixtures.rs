mod common;

use common::{data_dir, mini_corpus, rst_dt_options, wsj_1100};
use rstprompt::corpus::{load_split, read_dis, write_dis, write_tree, SplitManifest};
use rstprompt::eval::{extract_tuples, EvalOptions};

#[test]
fn wsj_1100_fixture_structure() {
    let doc = wsj_1100();
    assert_eq!(doc.id(), "wsj_1100");
    assert_eq!(doc.len(), 6);
    assert_eq!(doc.edus()[2].text(), "Terms weren't disclosed.");
    let gold = doc.gold().unwrap();
    assert_eq!(
        write_tree(gold),
        "(NS Elaboration (NS Attribution (SN Attribution (leaf 1) (leaf 2)) (leaf 3)) \
         (NN Same-Unit (NS Elaboration (leaf 4) (leaf 5)) (leaf 6)))"
    );
    let tuples = extract_tuples(gold, EvalOptions::default());
    assert_eq!(tuples.len(), 5);
    assert_eq!(tuples.len(), gold.preorder_nodes().len());
}

#[test]
fn mini_corpus_shape() {
    let docs = mini_corpus();
    assert!(docs.len() >= 20);
    for d in &docs {
        assert!(
            (2..=40).contains(&d.len()),
            "{} has {} EDUs",
            d.id(),
            d.len()
        );
        let gold = d.gold().unwrap();
        gold.validate().unwrap();
        assert_eq!(gold.internal_count(), d.len() - 1);
    }
    assert!(docs.iter().any(|d| d.len() == 2));
    assert!(docs.iter().any(|d| d.len() == 40));
}

#[test]
fn mini_corpus_split_manifest() {
    let dir = data_dir().join("mini-corpus");
    let manifest = dir.join("mini.split");
    SplitManifest::read(&manifest).unwrap().validate().unwrap();
    let splits = load_split(&manifest, &dir, &rst_dt_options()).unwrap();
    assert_eq!(
        (splits.train.len(), splits.dev.len(), splits.test.len()),
        (16, 4, 4)
    );
}

#[test]
fn dis_files_survive_rewriting() {
    for entry in std::fs::read_dir(data_dir().join("mini-corpus")).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "dis") {
            continue;
        }
        let src = std::fs::read_to_string(&path).unwrap();
        let (tree, edus) = read_dis(&src).unwrap();
        let again = write_dis(&tree);
        let (tree2, edus2) = read_dis(&again).unwrap();
        assert_eq!(tree, tree2);
        assert_eq!(edus, edus2);
    }
}
