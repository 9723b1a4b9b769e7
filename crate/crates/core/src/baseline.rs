//! Biaffine span scoring over externally supplied span vectors.
//!
//! `h_left = FFN_left(u_left)`, `h_right = FFN_right(u_right)`, and
//! `score = h_left · W · h_right + v_left · h_left + v_right · h_right`,
//! with one `(W, v_left, v_right)` for split points and one per label.
//! Each FFN is a single affine layer followed by `tanh` (or nothing).

use std::fmt::Write as _;
use std::str::FromStr;

use ndarray::{concatenate, Array1, Array2, Axis};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BaselineError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vector has a non-finite entry")]
    NonFinite,
    #[error("no candidates to choose from")]
    NoCandidates,
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("parameter file line {line}: {msg}")]
    Format { line: usize, msg: String },
}

fn check_dim(expected: usize, found: usize) -> Result<(), BaselineError> {
    if expected == found {
        Ok(())
    } else {
        Err(BaselineError::DimensionMismatch { expected, found })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpanVector(Array1<f64>);

impl SpanVector {
    pub fn new(values: Vec<f64>) -> Result<Self, BaselineError> {
        Self::from_array(Array1::from(values))
    }

    pub fn from_array(values: Array1<f64>) -> Result<Self, BaselineError> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(SpanVector(values))
        } else {
            Err(BaselineError::NonFinite)
        }
    }

    pub fn zeros(dim: usize) -> Self {
        SpanVector(Array1::zeros(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &Array1<f64> {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    /// Mean of word vectors: the span representation.
    pub fn mean(words: &[SpanVector]) -> Result<Self, BaselineError> {
        let first = words.first().ok_or(BaselineError::NoCandidates)?;
        let mut sum = Array1::zeros(first.dim());
        for w in words {
            check_dim(first.dim(), w.dim())?;
            sum += &w.0;
        }
        Self::from_array(sum / words.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Tanh,
    Identity,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Tanh => x.tanh(),
            Activation::Identity => x,
        }
    }
}

impl FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tanh" => Ok(Activation::Tanh),
            "identity" => Ok(Activation::Identity),
            other => Err(format!("unknown activation `{other}`")),
        }
    }
}

/// Affine map `d -> d'`: `weight` is `d' x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub weight: Array2<f64>,
    pub bias: Array1<f64>,
}

impl Projection {
    pub fn zeros(input: usize, hidden: usize) -> Self {
        Projection {
            weight: Array2::zeros((hidden, input)),
            bias: Array1::zeros(hidden),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projection {
            weight: Array2::eye(dim),
            bias: Array1::zeros(dim),
        }
    }
}

/// `(W, v_left, v_right)` of one scoring function; `W` is `d' x d'`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearScorer {
    pub w: Array2<f64>,
    pub v_left: Array1<f64>,
    pub v_right: Array1<f64>,
}

impl BilinearScorer {
    pub fn zeros(hidden: usize) -> Self {
        BilinearScorer {
            w: Array2::zeros((hidden, hidden)),
            v_left: Array1::zeros(hidden),
            v_right: Array1::zeros(hidden),
        }
    }

    pub fn dim(&self) -> usize {
        self.v_left.len()
    }

    pub fn score(&self, h_left: &SpanVector, h_right: &SpanVector) -> Result<f64, BaselineError> {
        check_dim(self.dim(), h_left.dim())?;
        check_dim(self.dim(), h_right.dim())?;
        let (hl, hr) = (&h_left.0, &h_right.0);
        Ok(hl.dot(&self.w.dot(hr)) + self.v_left.dot(hl) + self.v_right.dot(hr))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BiaffineParams {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub activation: Activation,
    pub left: Projection,
    pub right: Projection,
    pub split: BilinearScorer,
    pub labels: Vec<(String, BilinearScorer)>,
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Array2<f64> {
    Array2::from_shape_fn((rows, cols), |_| rng.gen_range(-1.0..1.0))
}

fn random_vector<R: Rng>(rng: &mut R, n: usize) -> Array1<f64> {
    Array1::from_shape_fn(n, |_| rng.gen_range(-1.0..1.0))
}

impl BiaffineParams {
    pub fn zeros(input_dim: usize, hidden_dim: usize, labels: &[&str]) -> Self {
        BiaffineParams {
            input_dim,
            hidden_dim,
            activation: Activation::Tanh,
            left: Projection::zeros(input_dim, hidden_dim),
            right: Projection::zeros(input_dim, hidden_dim),
            split: BilinearScorer::zeros(hidden_dim),
            labels: labels
                .iter()
                .map(|l| (l.to_string(), BilinearScorer::zeros(hidden_dim)))
                .collect(),
        }
    }

    /// Entries drawn uniformly from `[-1, 1)`.
    pub fn random<R: Rng>(
        rng: &mut R,
        input_dim: usize,
        hidden_dim: usize,
        labels: &[&str],
    ) -> Self {
        let scorer = |rng: &mut R| BilinearScorer {
            w: random_matrix(rng, hidden_dim, hidden_dim),
            v_left: random_vector(rng, hidden_dim),
            v_right: random_vector(rng, hidden_dim),
        };
        let left = Projection {
            weight: random_matrix(rng, hidden_dim, input_dim),
            bias: random_vector(rng, hidden_dim),
        };
        let right = Projection {
            weight: random_matrix(rng, hidden_dim, input_dim),
            bias: random_vector(rng, hidden_dim),
        };
        let split = scorer(rng);
        let labels = labels
            .iter()
            .map(|l| (l.to_string(), scorer(rng)))
            .collect();
        BiaffineParams {
            input_dim,
            hidden_dim,
            activation: Activation::Tanh,
            left,
            right,
            split,
            labels,
        }
    }

    pub fn label_names(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().map(|(l, _)| l.as_str())
    }

    fn label(&self, name: &str) -> Result<&BilinearScorer, BaselineError> {
        self.labels
            .iter()
            .find(|(l, _)| l == name)
            .map(|(_, s)| s)
            .ok_or_else(|| BaselineError::UnknownLabel(name.to_string()))
    }

    /// Text form: a header (`biaffine`, dims, activation, labels) then named
    /// blocks, each `name rows cols` followed by `rows` lines of values.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "biaffine 1");
        let _ = writeln!(out, "input_dim {}", self.input_dim);
        let _ = writeln!(out, "hidden_dim {}", self.hidden_dim);
        let _ = writeln!(out, "activation {}", self.activation.as_str());
        let names: Vec<&str> = self.label_names().collect();
        let _ = writeln!(out, "labels {}", names.join(" ").trim_end());
        let mut block = |name: &str, m: &Array2<f64>| {
            let _ = writeln!(out, "{name} {} {}", m.nrows(), m.ncols());
            for row in m.rows() {
                let vals: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
                let _ = writeln!(out, "{}", vals.join(" "));
            }
        };
        let row = |v: &Array1<f64>| v.clone().insert_axis(Axis(0));
        block("left.weight", &self.left.weight);
        block("left.bias", &row(&self.left.bias));
        block("right.weight", &self.right.weight);
        block("right.bias", &row(&self.right.bias));
        let scorers = std::iter::once(("split".to_string(), &self.split))
            .chain(self.labels.iter().map(|(l, s)| (format!("label.{l}"), s)));
        for (prefix, s) in scorers {
            block(&format!("{prefix}.W"), &s.w);
            block(&format!("{prefix}.v_left"), &row(&s.v_left));
            block(&format!("{prefix}.v_right"), &row(&s.v_right));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, BaselineError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
            .peekable();
        let last_line = text.lines().count();
        let mut next = |what: &str| {
            lines.next().ok_or(BaselineError::Format {
                line: last_line,
                msg: format!("unexpected end of file, expected {what}"),
            })
        };
        let fail = |line: usize, msg: String| BaselineError::Format { line, msg };

        let mut header = |key: &str| -> Result<(usize, String), BaselineError> {
            let (n, l) = next(key)?;
            if key.is_empty() {
                return Ok((n, l.to_string()));
            }
            let rest = l
                .strip_prefix(key)
                .filter(|r| r.is_empty() || r.starts_with(' '))
                .ok_or_else(|| fail(n, format!("expected `{key}`")))?;
            Ok((n, rest.trim().to_string()))
        };
        let (n, version) = header("biaffine")?;
        if version != "1" {
            return Err(fail(n, format!("unsupported version `{version}`")));
        }
        let parse_usize = |(n, s): (usize, String)| {
            s.parse::<usize>()
                .map_err(|_| fail(n, format!("expected a dimension, found `{s}`")))
        };
        let input_dim = parse_usize(header("input_dim")?)?;
        let hidden_dim = parse_usize(header("hidden_dim")?)?;
        let (n, act) = header("activation")?;
        let activation = act.parse().map_err(|m| fail(n, m))?;
        let (_, labels) = header("labels")?;
        let labels: Vec<String> = labels.split_whitespace().map(str::to_string).collect();

        let mut block =
            |name: &str, rows: usize, cols: usize| -> Result<Array2<f64>, BaselineError> {
                let (n, l) = header(name)?;
                let dims: Vec<&str> = l.split_whitespace().collect();
                if dims != [rows.to_string(), cols.to_string()] {
                    return Err(fail(n, format!("block `{name}` must be {rows} x {cols}")));
                }
                let mut values = Vec::with_capacity(rows * cols);
                for _ in 0..rows {
                    let (n, l) = header("")?;
                    let row: Vec<f64> = l
                        .split_whitespace()
                        .map(|v| v.parse::<f64>())
                        .collect::<Result<_, _>>()
                        .map_err(|e| fail(n, e.to_string()))?;
                    if row.len() != cols || row.iter().any(|v| !v.is_finite()) {
                        return Err(fail(n, format!("expected {cols} finite values")));
                    }
                    values.extend(row);
                }
                Ok(Array2::from_shape_vec((rows, cols), values).expect("shape checked"))
            };
        let vector = |m: Array2<f64>| m.row(0).to_owned();
        let left = Projection {
            weight: block("left.weight", hidden_dim, input_dim)?,
            bias: vector(block("left.bias", 1, hidden_dim)?),
        };
        let right = Projection {
            weight: block("right.weight", hidden_dim, input_dim)?,
            bias: vector(block("right.bias", 1, hidden_dim)?),
        };
        let mut scorer = |prefix: &str| -> Result<BilinearScorer, BaselineError> {
            Ok(BilinearScorer {
                w: block(&format!("{prefix}.W"), hidden_dim, hidden_dim)?,
                v_left: vector(block(&format!("{prefix}.v_left"), 1, hidden_dim)?),
                v_right: vector(block(&format!("{prefix}.v_right"), 1, hidden_dim)?),
            })
        };
        let split = scorer("split")?;
        let mut scored = Vec::with_capacity(labels.len());
        for l in labels {
            let s = scorer(&format!("label.{l}"))?;
            scored.push((l, s));
        }
        Ok(BiaffineParams {
            input_dim,
            hidden_dim,
            activation,
            left,
            right,
            split,
            labels: scored,
        })
    }
}

pub fn project(
    u: &SpanVector,
    side: Side,
    params: &BiaffineParams,
) -> Result<SpanVector, BaselineError> {
    check_dim(params.input_dim, u.dim())?;
    let p = match side {
        Side::Left => &params.left,
        Side::Right => &params.right,
    };
    let act = params.activation;
    let h = (p.weight.dot(&u.0) + &p.bias).mapv(|x| act.apply(x));
    SpanVector::from_array(h)
}

pub fn split_score(
    h_left: &SpanVector,
    h_right: &SpanVector,
    params: &BiaffineParams,
) -> Result<f64, BaselineError> {
    params.split.score(h_left, h_right)
}

pub fn label_score(
    h_left: &SpanVector,
    h_right: &SpanVector,
    label: &str,
    params: &BiaffineParams,
) -> Result<f64, BaselineError> {
    params.label(label)?.score(h_left, h_right)
}

/// Index of the largest score; ties go to the earliest index.
pub fn argmax_first(scores: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// Best split point given `(u_left, u_right)` for each candidate `k` in order.
pub fn best_split(
    candidates: &[(SpanVector, SpanVector)],
    params: &BiaffineParams,
) -> Result<usize, BaselineError> {
    let scores = candidates
        .iter()
        .map(|(ul, ur)| {
            let hl = project(ul, Side::Left, params)?;
            let hr = project(ur, Side::Right, params)?;
            split_score(&hl, &hr, params)
        })
        .collect::<Result<Vec<_>, _>>()?;
    argmax_first(&scores).ok_or(BaselineError::NoCandidates)
}

/// Highest-scoring label for projected `h_left`, `h_right`; ties go to the lexicographically first name.
pub fn best_label<'a>(
    h_left: &SpanVector,
    h_right: &SpanVector,
    params: &'a BiaffineParams,
) -> Result<&'a str, BaselineError> {
    let mut best: Option<(&str, f64)> = None;
    for (name, scorer) in &params.labels {
        let s = scorer.score(h_left, h_right)?;
        let better = match best {
            None => true,
            Some((b, bs)) => s > bs || (s == bs && name.as_str() < b),
        };
        if better {
            best = Some((name, s));
        }
    }
    best.map(|(n, _)| n).ok_or(BaselineError::NoCandidates)
}

/// `[u_s0; u_s1; u_q0]`, the input of the shift-reduce classifiers.
pub fn concat_features(
    u_s0: &SpanVector,
    u_s1: &SpanVector,
    u_q0: &SpanVector,
) -> Result<SpanVector, BaselineError> {
    check_dim(u_s0.dim(), u_s1.dim())?;
    check_dim(u_s0.dim(), u_q0.dim())?;
    let joined = concatenate(Axis(0), &[u_s0.0.view(), u_s1.0.view(), u_q0.0.view()])
        .expect("equal-rank vectors");
    SpanVector::from_array(joined)
}
