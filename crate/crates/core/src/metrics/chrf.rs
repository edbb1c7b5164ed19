//! Character n-gram F-score.
//!
//! Whitespace is removed before extracting character n-grams. The F-beta of
//! each order is averaged over the orders for which both sides have at
//! least one n-gram. Optional word n-grams (`word_order > 0`) are averaged
//! in the same way alongside the character orders.

use crate::collection::Item;
use crate::engine::PairScorer;
use crate::error::{Error, Result};
use crate::text::{NGramProfile, Tokenizer};

fn order_f_beta<T: Eq + std::hash::Hash>(pred: &[T], reference: &[T], order: usize, beta: f64) -> Option<f64> {
    let p = NGramProfile::new(pred, order);
    let r = NGramProfile::new(reference, order);
    if p.total() == 0 || r.total() == 0 {
        return None;
    }
    let m = p.overlap(&r) as f64;
    let precision = m / p.total() as f64;
    let recall = m / r.total() as f64;
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    Some(if denom > 0.0 { (1.0 + b2) * precision * recall / denom } else { 0.0 })
}

pub fn chrf_score(prediction: &str, reference: &str, char_order: usize, word_order: usize, beta: f64) -> f64 {
    let prep = Tokenizer::default();
    let pred = prep.prepare(prediction);
    let refr = prep.prepare(reference);
    let pc: Vec<char> = pred.chars().filter(|c| !c.is_whitespace()).collect();
    let rc: Vec<char> = refr.chars().filter(|c| !c.is_whitespace()).collect();
    if pc.is_empty() && rc.is_empty() {
        return 1.0;
    }
    let mut scores: Vec<f64> = (1..=char_order).filter_map(|n| order_f_beta(&pc, &rc, n, beta)).collect();
    if word_order > 0 {
        let pw: Vec<&str> = pred.split_whitespace().collect();
        let rw: Vec<&str> = refr.split_whitespace().collect();
        scores.extend((1..=word_order).filter_map(|n| order_f_beta(&pw, &rw, n, beta)));
    }
    if scores.is_empty() {
        return 0.0;
    }
    scores.iter().sum::<f64>() / scores.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chrf {
    pub char_order: usize,
    pub word_order: usize,
    pub beta: f64,
}

impl Default for Chrf {
    fn default() -> Self {
        Self { char_order: 6, word_order: 0, beta: 2.0 }
    }
}

impl Chrf {
    pub fn new(char_order: usize, word_order: usize, beta: f64) -> Result<Self> {
        if char_order == 0 {
            return Err(Error::Param("char_order must be at least 1".into()));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::Param(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { char_order, word_order, beta })
    }
}

impl PairScorer for Chrf {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        Ok(chrf_score(prediction.as_text()?, reference.as_text()?, self.char_order, self.word_order, self.beta))
    }
}
