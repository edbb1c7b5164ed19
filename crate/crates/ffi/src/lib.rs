//! C ABI over the `quorum` evaluation engine.
//!
//! Data crosses the boundary as NUL-terminated UTF-8 JSON. Every fallible
//! function returns a [`QuorumStatus`]; on failure a message is available
//! from [`quorum_last_error_message`] on the same thread. Strings handed out
//! through `out` parameters belong to the caller and must be released with
//! [`quorum_string_free`].
//!
//! Scorer configuration:
//!
//! ```json
//! {
//!   "metrics": ["bleu", {"name": "chrf", "params": {"beta": 1.0}}],
//!   "task": "language-generation",
//!   "run_mode": "concurrent",
//!   "workers": "auto",
//!   "reduce": {"ref": "max", "pred": "max", "corpus": "mean"}
//! }
//! ```
//!
//! Only `metrics` is required. Predictions and references are JSON arrays
//! whose elements take the same shapes as lines of the CLI's JSONL input.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quorum::jsonl::parse_entry;
use quorum::{
    validate_collection, CorpusReduce, Error, EvaluationCollection, ParamValue, Params, PayloadKind, RawEntry, Reduce,
    ReducePolicy, Registry, RunMode, Scorer, ScorerConfig, TaskClass, WorkerCap,
};
use serde::Deserialize;

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuorumStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidJson = 3,
    LengthMismatch = 4,
    Schema = 5,
    TaskMismatch = 6,
    UnknownMetric = 7,
    InvalidConfig = 8,
    Degenerate = 9,
    Io = 10,
    /// A Rust panic was caught at the boundary.
    Internal = 11,
}

impl From<&Error> for QuorumStatus {
    fn from(e: &Error) -> Self {
        match e.root() {
            Error::LengthMismatch { .. } => QuorumStatus::LengthMismatch,
            Error::Schema(_) | Error::Ingest { .. } => QuorumStatus::Schema,
            Error::TaskMismatch(_) => QuorumStatus::TaskMismatch,
            Error::UnknownMetric(_) => QuorumStatus::UnknownMetric,
            Error::DegenerateCorpus(_) | Error::DegenerateInput(_) => QuorumStatus::Degenerate,
            Error::Io(_) => QuorumStatus::Io,
            _ => QuorumStatus::InvalidConfig,
        }
    }
}

/// Opaque scorer handle.
pub struct QuorumScorer {
    scorer: Scorer,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', "\\0")).expect("NULs were replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(QuorumStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(QuorumStatus::from(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(QuorumStatus::InvalidJson, format!("invalid JSON: {e}"))
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QuorumStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QuorumStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(panic) => {
            let what = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal error: {what}"));
            QuorumStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(QuorumStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(QuorumStatus::InvalidUtf8, format!("{what} is not UTF-8: {e}")))
}

unsafe fn write_out(out: *mut *mut c_char, value: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(QuorumStatus::NullPointer, "output pointer is NULL".into()));
    }
    let c = CString::new(value).map_err(|e| Failure(QuorumStatus::Internal, e.to_string()))?;
    *out = c.into_raw();
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum MetricSpec {
    Name(String),
    Full {
        name: String,
        #[serde(default)]
        params: Params,
    },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WorkersSpec {
    Count(usize),
    Text(String),
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ReduceSpec {
    #[serde(rename = "ref")]
    ref_reduce: Option<String>,
    #[serde(rename = "pred")]
    pred_reduce: Option<String>,
    #[serde(rename = "corpus")]
    corpus_reduce: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ScorerSpec {
    metrics: Vec<MetricSpec>,
    task: Option<String>,
    run_mode: Option<String>,
    workers: Option<WorkersSpec>,
    #[serde(default)]
    reduce: ReduceSpec,
}

fn build_policy(spec: &ReduceSpec) -> Result<ReducePolicy, Error> {
    let d = ReducePolicy::default();
    Ok(ReducePolicy::new(
        spec.ref_reduce.as_deref().map(str::parse::<Reduce>).transpose()?.unwrap_or(d.ref_reduce),
        spec.pred_reduce.as_deref().map(str::parse::<Reduce>).transpose()?.unwrap_or(d.pred_reduce),
        spec.corpus_reduce.as_deref().map(str::parse::<CorpusReduce>).transpose()?.unwrap_or(d.corpus_reduce),
    ))
}

fn build_scorer(spec: ScorerSpec) -> Result<Scorer, Error> {
    let registry = Registry::with_builtins();
    let task = spec.task.as_deref().map(str::parse::<TaskClass>).transpose()?;
    let metrics = spec
        .metrics
        .into_iter()
        .map(|m| {
            let (name, params) = match m {
                MetricSpec::Name(n) => (n, Params::new()),
                MetricSpec::Full { name, params } => (name, params),
            };
            match task {
                Some(t) => registry.load_for_task(&name, &params, t),
                None => registry.load_metric(&name, &params),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let run_mode = spec.run_mode.as_deref().map(str::parse::<RunMode>).transpose()?.unwrap_or_default();
    let worker_cap = match spec.workers {
        None => WorkerCap::Auto,
        Some(WorkersSpec::Count(n)) => n.to_string().parse()?,
        Some(WorkersSpec::Text(s)) => s.parse()?,
    };
    let config = ScorerConfig::new(metrics).run_mode(run_mode).worker_cap(worker_cap).policy(build_policy(&spec.reduce)?);
    Scorer::new(config)
}

fn parse_entries(json: &str, kind: PayloadKind) -> Result<Vec<RawEntry>, Failure> {
    let values: Vec<serde_json::Value> = serde_json::from_str(json)?;
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| parse_entry(v, kind, i + 1).map_err(Failure::from))
        .collect()
}

fn parse_collection(predictions: &str, references: &str, kind: PayloadKind) -> Result<EvaluationCollection, Failure> {
    Ok(validate_collection(parse_entries(predictions, kind)?, parse_entries(references, kind)?)?)
}

/// Builds a scorer from a JSON configuration. On success `*out` holds a
/// handle to release with [`quorum_scorer_free`].
///
/// # Safety
/// `config_json` must be NULL or a valid NUL-terminated string; `out` must be
/// NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn quorum_scorer_new(config_json: *const c_char, out: *mut *mut QuorumScorer) -> QuorumStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(QuorumStatus::NullPointer, "output pointer is NULL".into()));
        }
        let spec: ScorerSpec = serde_json::from_str(read_str(config_json, "config")?)?;
        let scorer = build_scorer(spec)?;
        *out = Box::into_raw(Box::new(QuorumScorer { scorer }));
        Ok(())
    })
}

/// Evaluates one collection and writes the canonical JSON report to `*out`.
/// A handle must not be used from two threads at once.
///
/// # Safety
/// `scorer` must come from [`quorum_scorer_new`] and not have been freed.
/// String arguments must be NULL or valid NUL-terminated strings; `out`
/// must be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn quorum_scorer_evaluate(
    scorer: *const QuorumScorer,
    predictions_json: *const c_char,
    references_json: *const c_char,
    out: *mut *mut c_char,
) -> QuorumStatus {
    guard(|| {
        let scorer = scorer
            .as_ref()
            .ok_or_else(|| Failure(QuorumStatus::NullPointer, "scorer is NULL".into()))?;
        let kind = scorer.scorer.task().payload_kind();
        let collection =
            parse_collection(read_str(predictions_json, "predictions")?, read_str(references_json, "references")?, kind)?;
        let report = scorer.scorer.evaluate(&collection)?;
        write_out(out, report.to_canonical_json())
    })
}

/// Releases a scorer. NULL is ignored.
///
/// # Safety
/// `scorer` must be NULL or come from [`quorum_scorer_new`], and must not be
/// used afterwards.
#[no_mangle]
pub unsafe extern "C" fn quorum_scorer_free(scorer: *mut QuorumScorer) {
    if !scorer.is_null() {
        drop(Box::from_raw(scorer));
    }
}

/// Loads one metric and scores a collection with the default reduce policy.
/// `params_json` may be NULL for defaults. `*out` receives
/// `{"score": ..., "components": {...}}`.
///
/// # Safety
/// String arguments must be NULL or valid NUL-terminated strings; `out` must
/// be NULL or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn quorum_compute_metric(
    name: *const c_char,
    params_json: *const c_char,
    predictions_json: *const c_char,
    references_json: *const c_char,
    out: *mut *mut c_char,
) -> QuorumStatus {
    guard(|| {
        let name = read_str(name, "metric name")?;
        let params: Params = if params_json.is_null() {
            Params::new()
        } else {
            serde_json::from_str::<std::collections::BTreeMap<String, ParamValue>>(read_str(params_json, "params")?)?
        };
        let metric = Registry::with_builtins().load_metric(name, &params)?;
        let kind = metric.descriptor().task.payload_kind();
        let collection =
            parse_collection(read_str(predictions_json, "predictions")?, read_str(references_json, "references")?, kind)?;
        let result = metric.compute(&collection, &ReducePolicy::default())?;
        write_out(out, serde_json::to_string(&result)?)
    })
}

/// Message for the last failed call on this thread, or NULL after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn quorum_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned through an `out` parameter. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string produced by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn quorum_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn quorum_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
