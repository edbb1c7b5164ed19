//! The generic computation framework.
//!
//! Instance-scored metrics go through three reduces: every prediction is
//! scored against every reference and the reference-level scores are reduced
//! (`ref_reduce`), the per-prediction results are reduced (`pred_reduce`), and
//! the per-instance scores are reduced over the corpus (`corpus_reduce`).
//!
//! Corpus-statistic metrics (BLEU and friends) cannot be averaged per
//! instance. For those, each prediction yields additive statistics against
//! the whole reference instance, one prediction per instance is selected by
//! `pred_reduce` over a provisional per-prediction score, and the selected
//! statistics are summed before a single finalize step.

use std::ops::AddAssign;
use std::thread;

use crate::collection::{EvaluationCollection, EvaluationInstance, Item, ReferenceInstance};
use crate::error::{Error, Result};
use crate::reduce::{Polarity, ReducePolicy};
use crate::result::MetricResult;

/// Scores one prediction against one reference. Must be deterministic.
pub trait PairScorer: Send + Sync {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64>;

    fn polarity(&self) -> Polarity {
        Polarity::HigherIsBetter
    }
}

impl<F> PairScorer for F
where
    F: Fn(&Item, &Item) -> Result<f64> + Send + Sync,
{
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        self(prediction, reference)
    }
}

pub fn score_instance(instance: &EvaluationInstance, scorer: &dyn PairScorer, policy: &ReducePolicy) -> Result<f64> {
    let polarity = scorer.polarity();
    let mut per_ref = Vec::with_capacity(instance.references.len());
    let mut per_pred = Vec::with_capacity(instance.predictions.len());
    for p in &instance.predictions {
        per_ref.clear();
        for r in &instance.references {
            per_ref.push(scorer.score_pair(p, r)?);
        }
        per_pred.push(policy.ref_reduce.apply(&per_ref, polarity));
    }
    Ok(policy.pred_reduce.apply(&per_pred, polarity))
}

/// Per-instance scores in instance order.
pub fn instance_scores(
    collection: &EvaluationCollection,
    scorer: &dyn PairScorer,
    policy: &ReducePolicy,
    workers: usize,
) -> Result<Vec<f64>> {
    let instances = collection.instances();
    let score_at = |i: usize| {
        score_instance(&instances[i], scorer, policy)
            .map_err(|e| Error::ScorerFailure { instance: i, source: Box::new(e) })
    };

    let workers = workers.clamp(1, instances.len());
    if workers == 1 {
        return (0..instances.len()).map(score_at).collect();
    }

    // Contiguous chunks, each worker fills its own slice of the output buffer.
    let mut slots: Vec<Option<Result<f64>>> = (0..instances.len()).map(|_| None).collect();
    let chunk = instances.len().div_ceil(workers);
    thread::scope(|s| {
        for (c, out) in slots.chunks_mut(chunk).enumerate() {
            let score_at = &score_at;
            s.spawn(move || {
                for (j, slot) in out.iter_mut().enumerate() {
                    *slot = Some(score_at(c * chunk + j));
                }
            });
        }
    });
    slots.into_iter().map(|s| s.expect("every slot filled")).collect()
}

pub fn score_collection(collection: &EvaluationCollection, scorer: &dyn PairScorer, policy: &ReducePolicy) -> Result<f64> {
    score_collection_with(collection, scorer, policy, 1)
}

/// As [`score_collection`], spreading instances over `workers` threads. The
/// result is bit-identical for every worker count.
pub fn score_collection_with(
    collection: &EvaluationCollection,
    scorer: &dyn PairScorer,
    policy: &ReducePolicy,
    workers: usize,
) -> Result<f64> {
    let scores = instance_scores(collection, scorer, policy, workers)?;
    Ok(policy.corpus_reduce.apply(&scores))
}

/// A metric whose corpus score is computed from pooled sufficient statistics.
pub trait CorpusStatistic: Send + Sync {
    type Stats: Clone + Default + for<'a> AddAssign<&'a Self::Stats>;

    /// Statistics of one prediction against the full reference instance.
    fn extract(&self, prediction: &Item, references: &ReferenceInstance) -> Result<Self::Stats>;

    /// Sentence-level score used to pick which prediction enters the pool.
    fn provisional_score(&self, stats: &Self::Stats) -> f64;

    fn finalize(&self, pooled: &Self::Stats) -> Result<MetricResult>;

    fn polarity(&self) -> Polarity {
        Polarity::HigherIsBetter
    }
}

/// Statistics selected for one instance: those of the `pred_reduce` winner.
pub fn select_instance_stats<M: CorpusStatistic + ?Sized>(
    instance: &EvaluationInstance,
    metric: &M,
    policy: &ReducePolicy,
) -> Result<M::Stats> {
    let mut stats: Vec<M::Stats> = instance
        .predictions
        .iter()
        .map(|p| metric.extract(p, &instance.references))
        .collect::<Result<_>>()?;
    if stats.len() == 1 {
        return Ok(stats.pop().expect("one element"));
    }
    let provisional: Vec<f64> = stats.iter().map(|s| metric.provisional_score(s)).collect();
    let winner = policy.pred_reduce.select(&provisional, metric.polarity());
    Ok(stats.swap_remove(winner))
}

pub fn score_collection_corpus<M: CorpusStatistic + ?Sized>(
    collection: &EvaluationCollection,
    metric: &M,
    policy: &ReducePolicy,
) -> Result<MetricResult> {
    let mut pooled = M::Stats::default();
    for (i, instance) in collection.instances().iter().enumerate() {
        let selected = select_instance_stats(instance, metric, policy)
            .map_err(|e| Error::ScorerFailure { instance: i, source: Box::new(e) })?;
        pooled += &selected;
    }
    metric.finalize(&pooled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::{validate_collection, InstanceItems, RawEntry};
    use crate::reduce::{CorpusReduce, Reduce};

    /// Looks up a fixed score matrix; items are "p<i>" / "r<j>".
    fn matrix_scorer(m: Vec<Vec<f64>>) -> impl PairScorer {
        move |p: &Item, r: &Item| {
            let i: usize = p.as_text()?[1..].parse().unwrap();
            let j: usize = r.as_text()?[1..].parse().unwrap();
            Ok(m[i][j])
        }
    }

    fn instance(k: usize, m: usize) -> EvaluationInstance {
        let items = |prefix: &str, n: usize| {
            InstanceItems::new((0..n).map(|i| Item::Text(format!("{prefix}{i}"))).collect()).unwrap()
        };
        EvaluationInstance::new(items("p", k), items("r", m)).unwrap()
    }

    fn policy(r: Reduce, p: Reduce) -> ReducePolicy {
        ReducePolicy::new(r, p, CorpusReduce::Mean)
    }

    #[test]
    fn singleton_is_identity() {
        let s = matrix_scorer(vec![vec![0.7]]);
        assert_eq!(score_instance(&instance(1, 1), &s, &ReducePolicy::default()).unwrap(), 0.7);
    }

    #[test]
    fn max_max_on_matrix() {
        let s = matrix_scorer(vec![vec![0.2, 0.8], vec![0.5, 0.4]]);
        assert_eq!(score_instance(&instance(2, 2), &s, &policy(Reduce::Max, Reduce::Max)).unwrap(), 0.8);
    }

    #[test]
    fn mean_mean_on_matrix() {
        // Brute force over all k x m pairs: row means 0.5 and 0.45, mean of those 0.475.
        let m = vec![vec![0.2, 0.8], vec![0.5, 0.4]];
        let oracle: f64 = m.iter().map(|row| row.iter().sum::<f64>() / 2.0).sum::<f64>() / 2.0;
        assert!((oracle - 0.475).abs() < 1e-15);
        let s = matrix_scorer(m);
        let got = score_instance(&instance(2, 2), &s, &policy(Reduce::Mean, Reduce::Mean)).unwrap();
        assert!((got - oracle).abs() < 1e-15);
    }

    #[test]
    fn lower_is_better_flips_max() {
        struct Ter;
        impl PairScorer for Ter {
            fn score_pair(&self, p: &Item, r: &Item) -> Result<f64> {
                Ok(if p == r { 0.0 } else { 2.0 })
            }
            fn polarity(&self) -> Polarity {
                Polarity::LowerIsBetter
            }
        }
        let c = validate_collection(vec!["a".into()], vec![vec!["b", "a"].into()]).unwrap();
        assert_eq!(score_collection(&c, &Ter, &ReducePolicy::default()).unwrap(), 0.0);
    }

    #[test]
    fn corpus_mean_and_sum() {
        let c = validate_collection(vec!["0.8".into(), "0.4".into()], vec!["x".into(), "x".into()]).unwrap();
        let s = |p: &Item, _: &Item| -> Result<f64> { Ok(p.as_text()?.parse().unwrap()) };
        let got = score_collection(&c, &s, &ReducePolicy::default()).unwrap();
        assert!((got - 0.6).abs() < 1e-15);
        let sum = score_collection(&c, &s, &ReducePolicy::new(Reduce::Max, Reduce::Max, CorpusReduce::Sum)).unwrap();
        assert!((sum - 1.2).abs() < 1e-15);
    }

    #[test]
    fn n1_equals_instance_score() {
        let s = matrix_scorer(vec![vec![0.1, 0.3], vec![0.9, 0.2]]);
        let inst = instance(2, 2);
        let c = EvaluationCollection::new(vec![inst.clone()]).unwrap();
        for pol in [policy(Reduce::Max, Reduce::Mean), policy(Reduce::Min, Reduce::Max)] {
            assert_eq!(score_collection(&c, &s, &pol).unwrap(), score_instance(&inst, &s, &pol).unwrap());
        }
    }

    #[test]
    fn failure_carries_instance_index() {
        let c = validate_collection(vec!["ok".into(), "bad".into()], vec!["x".into(), "x".into()]).unwrap();
        let s = |p: &Item, _: &Item| -> Result<f64> {
            match p.as_text()? {
                "bad" => Err(Error::DegenerateInput("boom".into())),
                _ => Ok(1.0),
            }
        };
        let err = score_collection(&c, &s, &ReducePolicy::default()).unwrap_err();
        assert!(matches!(err, Error::ScorerFailure { instance: 1, .. }));
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let preds: Vec<RawEntry> = (0..37).map(|i| RawEntry::Text(format!("{}", (i * 7919) % 101))).collect();
        let refs: Vec<RawEntry> = (0..37).map(|_| RawEntry::Text("x".into())).collect();
        let c = validate_collection(preds, refs).unwrap();
        let s = |p: &Item, _: &Item| -> Result<f64> { Ok(p.as_text()?.parse::<f64>().unwrap() / 101.0) };
        let one = score_collection_with(&c, &s, &ReducePolicy::default(), 1).unwrap();
        for w in [2, 3, 8, 64] {
            assert_eq!(one.to_bits(), score_collection_with(&c, &s, &ReducePolicy::default(), w).unwrap().to_bits());
        }
    }
}
