//! Text evaluation over many predictions and many references per instance.
//!
//! A metric either scores prediction/reference pairs, which are reduced over
//! references, then predictions, then the corpus, or it pools per-instance
//! statistics and finalizes once (the BLEU family, classification and
//! span F1). Metrics are loaded by name from a [`Registry`], and a
//! [`Scorer`] runs several same-task metrics over one collection, either
//! concurrently or one after another, with identical results.
//!
//! ```
//! use quorum::{validate_collection, Params, Registry, Scorer, ScorerConfig};
//!
//! let registry = Registry::with_builtins();
//! let metrics = ["bleu", "chrf"]
//!     .iter()
//!     .map(|m| registry.load_metric(m, &Params::new()))
//!     .collect::<Result<Vec<_>, _>>()?;
//! let scorer = Scorer::new(ScorerConfig::new(metrics))?;
//! let collection = validate_collection(
//!     vec!["the cat sat on the mat".into()],
//!     vec![vec!["the cat sat on the mat", "a cat was on the mat"].into()],
//! )?;
//! let report = scorer.evaluate(&collection)?;
//! assert_eq!(report.get("bleu").unwrap().score, 1.0);
//! # Ok::<(), quorum::Error>(())
//! ```

pub mod bench;
pub mod cli;
pub mod collection;
pub mod engine;
pub mod error;
pub mod jsonl;
pub mod metrics;
pub mod params;
pub mod reduce;
pub mod registry;
pub mod result;
pub mod scorer;
pub mod text;

pub use collection::{
    count_empty, validate_collection, EvaluationCollection, EvaluationInstance, InstanceItems, Item, PayloadKind,
    PredictionInstance, RawEntry, ReferenceInstance,
};
pub use engine::{score_collection, score_collection_corpus, score_instance, CorpusStatistic, PairScorer};
pub use error::{Error, Result};
pub use metrics::Metric;
pub use params::{params, ParamValue, Params};
pub use reduce::{CorpusReduce, Polarity, Reduce, ReducePolicy};
pub use registry::{LoadedMetric, MetricDescriptor, MetricMode, Registry, TaskClass};
pub use result::{Components, EvaluationReport, MetricResult};
pub use scorer::{check_task_compatibility, RunMode, Scorer, ScorerConfig, Timings, WorkerCap};
