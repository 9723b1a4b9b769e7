use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::{Oracle, OracleError, OracleQuery};

type Script = dyn Fn(&OracleQuery) -> String + Send + Sync;

/// Answers with a caller-supplied function of the query.
pub struct ScriptedOracle {
    script: Box<Script>,
    name: String,
}

impl ScriptedOracle {
    pub fn new(name: &str, f: impl Fn(&OracleQuery) -> String + Send + Sync + 'static) -> Self {
        ScriptedOracle {
            script: Box::new(f),
            name: name.to_string(),
        }
    }

    /// Always answers `text`.
    pub fn constant(text: &str) -> Self {
        let text = text.to_string();
        Self::new(&format!("constant:{text}"), move |_| text.clone())
    }

    /// Cycles through `responses` in order, regardless of query kind.
    pub fn cycle(responses: Vec<String>) -> Self {
        assert!(!responses.is_empty(), "cycle needs at least one response");
        let next = AtomicUsize::new(0);
        let name = format!("cycle:{}", responses.len());
        Self::new(&name, move |_| {
            let i = next.fetch_add(1, Ordering::SeqCst);
            responses[i % responses.len()].clone()
        })
    }
}

impl std::fmt::Debug for ScriptedOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScriptedOracle")
            .field("name", &self.name)
            .finish()
    }
}

impl Oracle for ScriptedOracle {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        Ok((self.script)(query))
    }

    fn fingerprint(&self) -> String {
        format!("scripted:{}", self.name)
    }
}

/// Seeded adversarial oracle: a mix of valid labels, near misses, out-of-range
/// integers, empty and multi-line junk.
#[derive(Debug)]
pub struct RandomOracle {
    rng: Mutex<StdRng>,
    seed: u64,
}

const JUNK: &[&str] = &[
    "",
    " ",
    "\n",
    "I think the answer is shift",
    "elaboration-of-sorts",
    "satellite-satellite",
    "Reduce!",
    "-1",
    "2.5",
    "NaN",
    "nucleus",
    "<unk>",
    "None",
];

impl RandomOracle {
    pub fn new(seed: u64) -> Self {
        RandomOracle {
            rng: Mutex::new(StdRng::seed_from_u64(seed)),
            seed,
        }
    }

    fn junk_string(rng: &mut StdRng) -> String {
        let len = rng.gen_range(0..24);
        (0..len)
            .map(|_| {
                let c: u8 = rng.gen_range(0x20..0x7f);
                if rng.gen_bool(0.05) {
                    '\n'
                } else {
                    c as char
                }
            })
            .collect()
    }
}

impl Oracle for RandomOracle {
    fn complete(&self, query: &OracleQuery) -> Result<String, OracleError> {
        let mut rng = self.rng.lock().expect("rng poisoned");
        let out = match rng.gen_range(0..6) {
            0 | 1 => {
                let label = &query.valid_labels[rng.gen_range(0..query.valid_labels.len())];
                if rng.gen_bool(0.5) {
                    format!(" {}\n{}", label.to_uppercase(), Self::junk_string(&mut rng))
                } else {
                    label.clone()
                }
            }
            2 => rng.gen_range(0..10_000u32).to_string(),
            3 => JUNK[rng.gen_range(0..JUNK.len())].to_string(),
            _ => Self::junk_string(&mut rng),
        };
        Ok(out)
    }

    fn fingerprint(&self) -> String {
        format!("random:{}", self.seed)
    }
}
