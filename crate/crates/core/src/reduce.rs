//! Reduce functions for the three aggregation stages.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Whether a larger score is better. `Reduce::Max` means "best", so for
/// lower-is-better metrics it picks the numeric minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Polarity {
    #[default]
    HigherIsBetter,
    LowerIsBetter,
}

impl Polarity {
    /// True when `a` is strictly better than `b`.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Polarity::HigherIsBetter => a > b,
            Polarity::LowerIsBetter => a < b,
        }
    }
}

/// Reference-level and prediction-level reduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Reduce {
    #[default]
    Max,
    Mean,
    Min,
}

impl Reduce {
    /// Reduces a non-empty slice of scores.
    pub fn apply(self, values: &[f64], polarity: Polarity) -> f64 {
        debug_assert!(!values.is_empty());
        match self {
            Reduce::Mean => mean(values),
            Reduce::Max | Reduce::Min => values[self.select(values, polarity)],
        }
    }

    /// Index of the value this reduce stands for. `Max`/`Min` return the first
    /// best/worst element; `Mean` returns the first element closest to the mean.
    pub fn select(self, values: &[f64], polarity: Polarity) -> usize {
        debug_assert!(!values.is_empty());
        match self {
            Reduce::Max => first_extreme(values, |a, b| polarity.better(a, b)),
            Reduce::Min => first_extreme(values, |a, b| polarity.better(b, a)),
            Reduce::Mean => {
                let m = mean(values);
                first_extreme(values, |a, b| (a - m).abs() < (b - m).abs())
            }
        }
    }
}

fn first_extreme(values: &[f64], wins: impl Fn(f64, f64) -> bool) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if wins(v, values[best]) {
            best = i;
        }
    }
    best
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Corpus-level reduce.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum CorpusReduce {
    #[default]
    Mean,
    Sum,
    /// Let the metric decide; instance-scored metrics use the mean,
    /// corpus-statistic metrics pool their statistics.
    MetricDefined,
}

impl CorpusReduce {
    pub fn apply(self, values: &[f64]) -> f64 {
        match self {
            CorpusReduce::Mean | CorpusReduce::MetricDefined => mean(values),
            CorpusReduce::Sum => values.iter().sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ReducePolicy {
    pub ref_reduce: Reduce,
    pub pred_reduce: Reduce,
    pub corpus_reduce: CorpusReduce,
}

impl ReducePolicy {
    pub fn new(ref_reduce: Reduce, pred_reduce: Reduce, corpus_reduce: CorpusReduce) -> Self {
        Self { ref_reduce, pred_reduce, corpus_reduce }
    }
}

impl FromStr for Reduce {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "max" => Ok(Reduce::Max),
            "mean" => Ok(Reduce::Mean),
            "min" => Ok(Reduce::Min),
            _ => Err(Error::Config(format!("unknown reduce `{s}` (expected max, mean or min)"))),
        }
    }
}

impl FromStr for CorpusReduce {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "mean" => Ok(CorpusReduce::Mean),
            "sum" => Ok(CorpusReduce::Sum),
            "metric_defined" => Ok(CorpusReduce::MetricDefined),
            _ => Err(Error::Config(format!(
                "unknown corpus reduce `{s}` (expected mean, sum or metric-defined)"
            ))),
        }
    }
}

impl fmt::Display for Reduce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reduce::Max => "max",
            Reduce::Mean => "mean",
            Reduce::Min => "min",
        })
    }
}
