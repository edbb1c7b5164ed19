//! ROUGE-N and ROUGE-L, reported as F-measures.

use crate::collection::Item;
use crate::engine::PairScorer;
use crate::error::Result;
use crate::text::{NGramProfile, Tokenizer};

fn f_measure(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = recall + b2 * precision;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

/// F1 of clipped n-gram overlap.
pub fn rouge_n(prediction: &[String], reference: &[String], order: usize) -> f64 {
    let p = NGramProfile::new(prediction, order);
    let r = NGramProfile::new(reference, order);
    if p.total() == 0 || r.total() == 0 {
        return if prediction == reference { 1.0 } else { 0.0 };
    }
    let overlap = p.overlap(&r) as f64;
    f_measure(overlap / p.total() as f64, overlap / r.total() as f64, 1.0)
}

pub fn lcs_len<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { cur[j].max(prev[j + 1]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// LCS-based F-measure.
pub fn rouge_l(prediction: &[String], reference: &[String], beta: f64) -> f64 {
    if prediction.is_empty() || reference.is_empty() {
        return if prediction == reference { 1.0 } else { 0.0 };
    }
    let lcs = lcs_len(prediction, reference) as f64;
    f_measure(lcs / prediction.len() as f64, lcs / reference.len() as f64, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RougeVariant {
    N(usize),
    L,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rouge {
    pub variant: RougeVariant,
    pub tokenizer: Tokenizer,
}

impl Rouge {
    pub fn new(variant: RougeVariant) -> Self {
        Self { variant, tokenizer: Tokenizer::default() }
    }
}

impl PairScorer for Rouge {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        let p = self.tokenizer.tokenize(prediction.as_text()?);
        let r = self.tokenizer.tokenize(reference.as_text()?);
        Ok(match self.variant {
            RougeVariant::N(order) => rouge_n(&p, &r, order),
            RougeVariant::L => rouge_l(&p, &r, 1.0),
        })
    }
}
