//! Exact-match accuracy for generation (token sequences) and classification
//! (label ids). Both are instance-scored with a 0/1 pair indicator, so a
//! `max` reduce means "any prediction matching any reference counts".

use crate::collection::Item;
use crate::engine::PairScorer;
use crate::error::Result;
use crate::text::Tokenizer;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TextAccuracy {
    pub tokenizer: Tokenizer,
}

impl PairScorer for TextAccuracy {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        let p = self.tokenizer.tokenize(prediction.as_text()?);
        let r = self.tokenizer.tokenize(reference.as_text()?);
        Ok(if p == r { 1.0 } else { 0.0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LabelAccuracy;

impl PairScorer for LabelAccuracy {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        Ok(if prediction.as_label()? == reference.as_label()? { 1.0 } else { 0.0 })
    }
}
