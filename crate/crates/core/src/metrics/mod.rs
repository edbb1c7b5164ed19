//! Bundled metrics and the object-safe [`Metric`] interface the registry and
//! scorer work with.

pub mod accuracy;
pub mod bleu;
pub mod chrf;
pub mod classification;
pub mod gleu;
pub mod meteor;
pub mod rouge;
pub mod seqlabel;
pub mod ter;

use crate::collection::EvaluationCollection;
use crate::engine::{score_collection_corpus, score_collection_with, CorpusStatistic, PairScorer};
use crate::error::Result;
use crate::reduce::ReducePolicy;
use crate::result::{Components, MetricResult};

/// A metric bound to its parameters. Implementations are immutable and may
/// be shared across threads.
pub trait Metric: Send + Sync {
    /// Scores a whole collection. `instance_workers` > 1 allows spreading
    /// instances over threads; results must not depend on it.
    fn compute(&self, collection: &EvaluationCollection, policy: &ReducePolicy, instance_workers: usize) -> Result<MetricResult>;

    /// The pair scorer, for metrics that reduce per-pair scores.
    fn pair_scorer(&self) -> Option<&dyn PairScorer> {
        None
    }
}

/// Runs a [`PairScorer`] through the three-stage reduce.
pub struct InstanceScored<S> {
    scorer: S,
    extra: Components,
}

impl<S: PairScorer> InstanceScored<S> {
    pub fn new(scorer: S) -> Self {
        Self { scorer, extra: Components::new() }
    }

    /// Constant components added to every result.
    pub fn with_components(mut self, extra: Components) -> Self {
        self.extra = extra;
        self
    }

    pub fn scorer(&self) -> &S {
        &self.scorer
    }
}

impl<S: PairScorer> Metric for InstanceScored<S> {
    fn compute(&self, collection: &EvaluationCollection, policy: &ReducePolicy, instance_workers: usize) -> Result<MetricResult> {
        let score = score_collection_with(collection, &self.scorer, policy, instance_workers)?;
        let mut result = MetricResult::new("", score);
        result.components = self.extra.clone();
        Ok(result)
    }

    fn pair_scorer(&self) -> Option<&dyn PairScorer> {
        Some(&self.scorer)
    }
}

/// Runs a [`CorpusStatistic`] through statistics pooling.
pub struct CorpusScored<M>(pub M);

impl<M: CorpusStatistic> Metric for CorpusScored<M> {
    fn compute(&self, collection: &EvaluationCollection, policy: &ReducePolicy, _instance_workers: usize) -> Result<MetricResult> {
        score_collection_corpus(collection, &self.0, policy)
    }
}
