//! Command failures and their exit codes.

use std::fmt;

use rstprompt::corpus::CorpusError;
use rstprompt::engine::ParseError;
use rstprompt::eval::EvalError;
use rstprompt::export::ExportError;
use rstprompt::inventory::InventoryError;
use rstprompt::oracle::OracleError;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FailureKind {
    /// Bad flags, configuration or oracle settings.
    Config,
    /// Unreadable input or unwritable output.
    Io,
    /// The completion endpoint could not be reached or kept failing.
    OracleTransport,
    /// Inputs are well-formed files but violate a contract (missing gold, ids, segmentation).
    Validation,
}

impl FailureKind {
    pub fn exit_code(self) -> i32 {
        match self {
            FailureKind::Config => 2,
            FailureKind::Io => 3,
            FailureKind::OracleTransport => 4,
            FailureKind::Validation => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FailureKind::Config => "config",
            FailureKind::Io => "io",
            FailureKind::OracleTransport => "oracle-transport",
            FailureKind::Validation => "validation",
        }
    }

    /// Order used to pick the exit code when several documents fail differently.
    fn severity(self) -> u8 {
        match self {
            FailureKind::OracleTransport => 3,
            FailureKind::Io => 2,
            FailureKind::Config => 1,
            FailureKind::Validation => 0,
        }
    }

    pub fn most_severe(kinds: impl IntoIterator<Item = FailureKind>) -> Option<FailureKind> {
        kinds.into_iter().max_by_key(|k| k.severity())
    }
}

#[derive(Debug)]
pub struct CliError {
    pub kind: FailureKind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: FailureKind, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
        }
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(FailureKind::Config, message)
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(FailureKind::Io, message)
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(FailureKind::Validation, message)
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }

    pub fn context(self, prefix: impl fmt::Display) -> Self {
        CliError {
            kind: self.kind,
            message: format!("{prefix}: {}", self.message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind.as_str(), self.message)
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

fn corpus_kind(e: &CorpusError) -> FailureKind {
    match e {
        CorpusError::Io(_) => FailureKind::Io,
        CorpusError::File { source, .. } => corpus_kind(source),
        CorpusError::Config(_) => FailureKind::Config,
        CorpusError::Inventory(i) => inventory_kind(i),
        _ => FailureKind::Validation,
    }
}

fn inventory_kind(e: &InventoryError) -> FailureKind {
    match e {
        InventoryError::Io(_) => FailureKind::Io,
        _ => FailureKind::Config,
    }
}

fn oracle_kind(e: &OracleError) -> FailureKind {
    match e {
        OracleError::Failure { .. } => FailureKind::OracleTransport,
        OracleError::Config(_) => FailureKind::Config,
        OracleError::Io(_) | OracleError::StoreCorrupt { .. } => FailureKind::Io,
        OracleError::ReplayExhausted(_) | OracleError::KindMismatch { .. } => {
            FailureKind::Validation
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::new(corpus_kind(&e), e.to_string())
    }
}

impl From<InventoryError> for CliError {
    fn from(e: InventoryError) -> Self {
        CliError::new(inventory_kind(&e), e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        CliError::new(oracle_kind(&e), e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        let kind = match &e {
            ParseError::Oracle(o) => oracle_kind(o),
            _ => FailureKind::Validation,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::validation(e.to_string())
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Corpus(c) => c.into(),
            ExportError::Parse { document, source } => {
                CliError::from(source).context(format!("document {document}"))
            }
            ExportError::Io(io) => io.into(),
            other => CliError::validation(other.to_string()),
        }
    }
}
