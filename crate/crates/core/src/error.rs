use thiserror::Error;

use crate::registry::TaskClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {predictions} prediction entries vs {references} reference entries{context}")]
    LengthMismatch {
        predictions: usize,
        references: usize,
        /// Optional location suffix, e.g. " (instance 3)".
        context: String,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("scorer failed on instance {instance}: {source}")]
    ScorerFailure {
        instance: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate corpus: {0}")]
    DegenerateCorpus(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("metric `{metric}` does not accept parameter `{param}`")]
    UnknownParam { metric: String, param: String },

    #[error("metric `{metric}` is not available for task {task}")]
    TaskUnavailable { metric: String, task: TaskClass },

    #[error("metric `{metric}` is registered for several tasks ({tasks}); use `<name>-for-<task>`")]
    AmbiguousMetric { metric: String, tasks: String },

    #[error("metric `{metric}` is already registered for task {task}")]
    DuplicateRegistration { metric: String, task: TaskClass },

    #[error("task mismatch: {}", describe_mismatch(.0))]
    TaskMismatch(Vec<(String, TaskClass)>),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("metric `{metric}` failed: {source}")]
    MetricFailed {
        metric: String,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Ingest { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn describe_mismatch(metrics: &[(String, TaskClass)]) -> String {
    metrics
        .iter()
        .map(|(name, task)| format!("{name} ({task})"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl Error {
    /// Strips `ScorerFailure`/`MetricFailed` wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::ScorerFailure { source, .. } | Error::MetricFailed { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code for the CLI. Each input/config error class has its own code.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::LengthMismatch { .. } => 3,
            Error::Schema(_) | Error::Ingest { .. } => 4,
            Error::TaskMismatch(_) => 5,
            Error::UnknownMetric(_) => 6,
            Error::UnknownParam { .. }
            | Error::Param(_)
            | Error::TaskUnavailable { .. }
            | Error::AmbiguousMetric { .. }
            | Error::DuplicateRegistration { .. }
            | Error::Config(_) => 7,
            Error::DegenerateCorpus(_) | Error::DegenerateInput(_) => 8,
            Error::Io(_) => 9,
            Error::ScorerFailure { .. } | Error::MetricFailed { .. } => 1,
        }
    }
}
