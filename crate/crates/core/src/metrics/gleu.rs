//! Sentence-level GoogleBLEU: min of n-gram precision and recall over all
//! orders `min_order..=max_order`, with matches and totals summed over orders.

use crate::collection::Item;
use crate::engine::PairScorer;
use crate::error::Result;
use crate::text::{NGramProfile, Tokenizer};

pub fn gleu_score(prediction: &[String], reference: &[String], min_order: usize, max_order: usize) -> f64 {
    assert!(min_order >= 1 && min_order <= max_order);
    let (mut matches, mut pred_total, mut ref_total) = (0usize, 0usize, 0usize);
    for order in min_order..=max_order {
        let p = NGramProfile::new(prediction, order);
        let r = NGramProfile::new(reference, order);
        matches += p.overlap(&r);
        pred_total += p.total();
        ref_total += r.total();
    }
    if pred_total == 0 || ref_total == 0 {
        return if prediction == reference { 1.0 } else { 0.0 };
    }
    let precision = matches as f64 / pred_total as f64;
    let recall = matches as f64 / ref_total as f64;
    precision.min(recall)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gleu {
    pub min_order: usize,
    pub max_order: usize,
    pub tokenizer: Tokenizer,
}

impl Default for Gleu {
    fn default() -> Self {
        Self { min_order: 1, max_order: 4, tokenizer: Tokenizer::default() }
    }
}

impl PairScorer for Gleu {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        let p = self.tokenizer.tokenize(prediction.as_text()?);
        let r = self.tokenizer.tokenize(reference.as_text()?);
        Ok(gleu_score(&p, &r, self.min_order, self.max_order))
    }
}
