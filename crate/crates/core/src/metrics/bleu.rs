//! BLEU and its standardized variant.
//!
//! Statistics per prediction: clipped n-gram matches and candidate n-gram
//! totals per order, candidate length, and the effective reference length
//! (the reference length closest to the candidate length, shorter on ties).
//! Orders for which the pooled candidate has no n-grams at all are left out
//! of the geometric mean.

use std::fmt;
use std::ops::AddAssign;

use crate::collection::{Item, ReferenceInstance};
use crate::engine::CorpusStatistic;
use crate::error::{Error, Result};
use crate::result::MetricResult;
use crate::text::{NGramProfile, Tokenizer, TokenizerMode};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BleuStats {
    pub matches: Vec<u64>,
    pub totals: Vec<u64>,
    pub candidate_len: u64,
    pub reference_len: u64,
}

impl AddAssign<&BleuStats> for BleuStats {
    fn add_assign(&mut self, rhs: &BleuStats) {
        let orders = self.matches.len().max(rhs.matches.len());
        self.matches.resize(orders, 0);
        self.totals.resize(orders, 0);
        for (i, (&m, &t)) in rhs.matches.iter().zip(&rhs.totals).enumerate() {
            self.matches[i] += m;
            self.totals[i] += t;
        }
        self.candidate_len += rhs.candidate_len;
        self.reference_len += rhs.reference_len;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Smoothing {
    #[default]
    None,
    /// Adds `k` to numerator and denominator from order 2 upwards.
    AddK(f64),
    /// Each zero-match order gets `1 / (2^z * total)`, `z` counting the zero
    /// orders seen so far.
    Exp,
}

impl Smoothing {
    pub fn parse(name: &str, k: f64) -> Result<Self> {
        match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "none" => Ok(Smoothing::None),
            "exp" => Ok(Smoothing::Exp),
            "add_k" => {
                if !(k.is_finite() && k > 0.0) {
                    return Err(Error::Param(format!("smoothing_k must be positive, got {k}")));
                }
                Ok(Smoothing::AddK(k))
            }
            _ => Err(Error::Param(format!("unknown smoothing `{name}` (expected none, add_k or exp)"))),
        }
    }
}

impl fmt::Display for Smoothing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothing::None => f.write_str("none"),
            Smoothing::AddK(_) => f.write_str("add_k"),
            Smoothing::Exp => f.write_str("exp"),
        }
    }
}

fn closest_ref_len(candidate_len: usize, ref_lens: impl IntoIterator<Item = usize>) -> usize {
    ref_lens
        .into_iter()
        .min_by_key(|&r| (r.abs_diff(candidate_len), r))
        .unwrap_or(0)
}

pub fn bleu_instance_stats(prediction: &str, references: &[&str], max_order: usize, tokenizer: &Tokenizer) -> BleuStats {
    assert!(max_order >= 1);
    let hyp = tokenizer.tokenize(prediction);
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenizer.tokenize(r)).collect();
    bleu_token_stats(&hyp, &refs, max_order)
}

pub(crate) fn bleu_token_stats(hyp: &[String], refs: &[Vec<String>], max_order: usize) -> BleuStats {
    let mut stats = BleuStats {
        matches: vec![0; max_order],
        totals: vec![0; max_order],
        candidate_len: hyp.len() as u64,
        reference_len: closest_ref_len(hyp.len(), refs.iter().map(Vec::len)) as u64,
    };
    for order in 1..=max_order {
        let cand = NGramProfile::new(hyp, order);
        if cand.total() == 0 {
            break;
        }
        stats.totals[order - 1] = cand.total() as u64;
        let Some((first, rest)) = refs.split_first() else { continue };
        let mut ceiling = NGramProfile::new(&first[..], order);
        for r in rest {
            ceiling.max_merge(&NGramProfile::new(&r[..], order));
        }
        stats.matches[order - 1] = cand.overlap(&ceiling) as u64;
    }
    stats
}

struct BleuParts {
    score: f64,
    /// `None` for orders without candidate n-grams.
    precisions: Vec<Option<f64>>,
    brevity_penalty: f64,
}

fn bleu_parts(stats: &BleuStats, max_order: usize, smoothing: Smoothing) -> BleuParts {
    let c = stats.candidate_len as f64;
    let r = stats.reference_len as f64;
    let brevity_penalty = if stats.candidate_len == 0 {
        0.0
    } else if c >= r {
        1.0
    } else {
        (1.0 - r / c).exp()
    };

    let mut zero_orders = 0;
    let precisions: Vec<Option<f64>> = (0..max_order)
        .map(|i| {
            let total = stats.totals.get(i).copied().unwrap_or(0);
            if total == 0 {
                return None;
            }
            let m = stats.matches[i] as f64;
            let t = total as f64;
            Some(match smoothing {
                Smoothing::None => m / t,
                Smoothing::AddK(k) if i > 0 => (m + k) / (t + k),
                Smoothing::AddK(_) => m / t,
                Smoothing::Exp if m == 0.0 => {
                    zero_orders += 1;
                    1.0 / (2f64.powi(zero_orders) * t)
                }
                Smoothing::Exp => m / t,
            })
        })
        .collect();

    let effective: Vec<f64> = precisions.iter().flatten().copied().collect();
    let score = if effective.is_empty() || effective.contains(&0.0) {
        0.0
    } else {
        let log_mean = effective.iter().map(|p| p.ln()).sum::<f64>() / effective.len() as f64;
        brevity_penalty * log_mean.exp()
    };
    BleuParts { score: score.min(1.0), precisions, brevity_penalty }
}

/// Corpus BLEU from pooled statistics. Fails on an empty pooled candidate.
pub fn bleu_finalize(pooled: &BleuStats, max_order: usize, smoothing: Smoothing) -> Result<MetricResult> {
    if pooled.candidate_len == 0 {
        return Err(Error::DegenerateCorpus("pooled candidate length is 0".into()));
    }
    Ok(bleu_result(pooled, max_order, smoothing))
}

fn bleu_result(pooled: &BleuStats, max_order: usize, smoothing: Smoothing) -> MetricResult {
    let parts = bleu_parts(pooled, max_order, smoothing);
    let mut result = MetricResult::new("bleu", parts.score)
        .with("brevity_penalty", parts.brevity_penalty)
        .with("translation_length", pooled.candidate_len as f64)
        .with("reference_length", pooled.reference_len as f64)
        .with("effective_order", parts.precisions.iter().flatten().count() as f64);
    if pooled.reference_len > 0 {
        result = result.with("length_ratio", pooled.candidate_len as f64 / pooled.reference_len as f64);
    }
    for (i, p) in parts.precisions.iter().enumerate() {
        if let Some(p) = p {
            result = result.with(format!("precision_{}", i + 1), *p);
        }
    }
    result
}

/// Sentence-level BLEU with exp smoothing; ranks predictions inside an instance.
pub fn smoothed_sentence_bleu(stats: &BleuStats, max_order: usize) -> f64 {
    bleu_parts(stats, max_order, Smoothing::Exp).score
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bleu {
    pub max_order: usize,
    pub tokenizer: Tokenizer,
    pub smoothing: Smoothing,
    /// Report 0 instead of failing when every prediction is empty.
    pub empty_scores_zero: bool,
}

impl Default for Bleu {
    fn default() -> Self {
        Self { max_order: 4, tokenizer: Tokenizer::default(), smoothing: Smoothing::None, empty_scores_zero: false }
    }
}

impl Bleu {
    /// Standardized pipeline: intl tokenization, exp smoothing.
    pub fn sacre(max_order: usize) -> Self {
        Self {
            max_order,
            tokenizer: Tokenizer::new(TokenizerMode::Intl),
            smoothing: Smoothing::Exp,
            empty_scores_zero: true,
        }
    }
}

impl CorpusStatistic for Bleu {
    type Stats = BleuStats;

    fn extract(&self, prediction: &Item, references: &ReferenceInstance) -> Result<BleuStats> {
        let refs: Vec<&str> = references.iter().map(Item::as_text).collect::<Result<_>>()?;
        Ok(bleu_instance_stats(prediction.as_text()?, &refs, self.max_order, &self.tokenizer))
    }

    fn provisional_score(&self, stats: &BleuStats) -> f64 {
        smoothed_sentence_bleu(stats, self.max_order)
    }

    fn finalize(&self, pooled: &BleuStats) -> Result<MetricResult> {
        if pooled.candidate_len == 0 && self.empty_scores_zero {
            return Ok(bleu_result(pooled, self.max_order, self.smoothing));
        }
        bleu_finalize(pooled, self.max_order, self.smoothing)
    }
}
