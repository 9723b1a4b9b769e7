//! Regenerates the bundled synthetic mini-corpus under `data/mini-corpus`.
//!
//! Run with `cargo run -p rstprompt --example gen_mini_corpus`.

use std::fs;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rstprompt::corpus::write_dis;
use rstprompt::synth::random_nary_tree;

const DOCS: usize = 24;
const SEED: u64 = 20240611;

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/mini-corpus");
    fs::create_dir_all(&dir)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut manifest =
        String::from("# split\tdocument\n@expect\ttrain\t16\n@expect\tdev\t4\n@expect\ttest\t4\n");
    for i in 0..DOCS {
        let n = match i {
            0 => 2,
            1 => 40,
            2 => 3,
            _ => rng.gen_range(2..=40),
        };
        let id = format!("synth_{:03}", i + 1);
        let tree = random_nary_tree(&mut rng, n);
        fs::write(dir.join(format!("{id}.out.dis")), write_dis(&tree))?;
        let split = match i % 6 {
            4 => "dev",
            5 => "test",
            _ => "train",
        };
        manifest.push_str(&format!("{split}\t{id}\n"));
    }
    fs::write(dir.join("mini.split"), manifest)?;
    println!("wrote {DOCS} documents to {}", dir.display());
    Ok(())
}
