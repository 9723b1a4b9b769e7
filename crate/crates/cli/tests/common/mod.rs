#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread;

use serde_json::{json, Value};
use tiny_http::{Header, Response, Server};

pub fn core_data() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/data")
}

pub fn mini_dir() -> PathBuf {
    core_data().join("mini-corpus")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden")
}

pub fn rstprompt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rstprompt"))
        .args(args)
        .env_remove("RSTPROMPT_API_KEY")
        .output()
        .expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// The four F1 values printed under the `Span Nuc Rel Full` header.
pub fn parse_scores(report: &str) -> Option<[f64; 4]> {
    let mut lines = report
        .lines()
        .skip_while(|l| l.split_whitespace().collect::<Vec<_>>() != ["Span", "Nuc", "Rel", "Full"]);
    lines.next()?;
    let vals: Vec<f64> = lines
        .next()?
        .split_whitespace()
        .map(|v| v.parse().ok())
        .collect::<Option<_>>()?;
    vals.try_into().ok()
}

pub struct Mock {
    pub url: String,
    pub hits: Arc<AtomicUsize>,
}

impl Mock {
    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

/// Local completions endpoint; `answer` gets the prompt and the 0-based request number,
/// `None` replies with HTTP 500.
pub fn mock_endpoint(answer: impl Fn(&str, usize) -> Option<String> + Send + 'static) -> Mock {
    let server = Server::http("127.0.0.1:0").expect("bind mock server");
    let url = format!(
        "http://{}/v1/completions",
        server.server_addr().to_ip().unwrap()
    );
    let hits = Arc::new(AtomicUsize::new(0));
    let h = hits.clone();
    thread::spawn(move || {
        for mut req in server.incoming_requests() {
            let n = h.fetch_add(1, Ordering::SeqCst);
            let mut body = String::new();
            let _ = req.as_reader().read_to_string(&mut body);
            let prompt = serde_json::from_str::<Value>(&body)
                .ok()
                .and_then(|v| v["prompt"].as_str().map(str::to_string))
                .unwrap_or_default();
            let resp = match answer(&prompt, n) {
                Some(text) => {
                    Response::from_string(json!({"choices": [{"text": text}]}).to_string())
                        .with_header(
                            Header::from_bytes("Content-Type", "application/json").unwrap(),
                        )
                }
                None => Response::from_string("unavailable").with_status_code(500),
            };
            let _ = req.respond(resp);
        }
    });
    Mock { url, hits }
}

/// Prompt-determined answers in the style of greedy decoding.
pub fn greedy_answer(prompt: &str) -> String {
    let h = prompt
        .bytes()
        .fold(7u64, |a, b| a.wrapping_mul(131).wrapping_add(b as u64));
    if prompt.starts_with("Stack2:") {
        if h % 3 == 0 { "reduce" } else { "shift" }.into()
    } else if prompt.starts_with("Input:") {
        (h % 2).to_string()
    } else if prompt.contains("Nucleus label (") {
        ["nucleus-satellite", "satellite-nucleus", "nucleus-nucleus"][(h % 3) as usize].into()
    } else {
        ["Elaboration", "Joint", "Attribution", "Same-Unit"][(h % 4) as usize].into()
    }
}

pub fn read_dir_bytes(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}
