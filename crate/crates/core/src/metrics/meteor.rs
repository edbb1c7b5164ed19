//! METEOR-lite: unigram alignment in two stages (exact form, then stem),
//! harmonic mean weighted towards recall, and a fragmentation penalty.
//!
//! There is no synonym stage. Within a stage each unaligned hypothesis word,
//! left to right, takes the reference position right after the previous
//! alignment when that position matches, else the first matching free one.

use crate::collection::Item;
use crate::engine::PairScorer;
use crate::error::{Error, Result};
use crate::result::Components;
use crate::text::{stem, Tokenizer};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeteorParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for MeteorParams {
    fn default() -> Self {
        Self { alpha: 0.9, beta: 3.0, gamma: 0.5 }
    }
}

/// Aligned (hypothesis index, reference index) pairs, sorted by hypothesis index.
pub fn meteor_alignment(hypothesis: &[String], reference: &[String]) -> Vec<(usize, usize)> {
    let stems_h: Vec<&str> = hypothesis.iter().map(|w| stem(w)).collect();
    let stems_r: Vec<&str> = reference.iter().map(|w| stem(w)).collect();
    let mut ref_used = vec![false; reference.len()];
    let mut hyp_to_ref: Vec<Option<usize>> = vec![None; hypothesis.len()];

    let stages: [&dyn Fn(usize, usize) -> bool; 2] =
        [&|h, r| hypothesis[h] == reference[r], &|h, r| stems_h[h] == stems_r[r]];
    for same in stages {
        for h in 0..hypothesis.len() {
            if hyp_to_ref[h].is_some() {
                continue;
            }
            let follow = hyp_to_ref[..h].iter().rev().flatten().next().map(|&r| r + 1);
            let pick = follow
                .filter(|&r| r < reference.len() && !ref_used[r] && same(h, r))
                .or_else(|| (0..reference.len()).find(|&r| !ref_used[r] && same(h, r)));
            if let Some(r) = pick {
                ref_used[r] = true;
                hyp_to_ref[h] = Some(r);
            }
        }
    }
    hyp_to_ref.iter().enumerate().filter_map(|(h, r)| r.map(|r| (h, r))).collect()
}

/// Runs of alignments adjacent in both hypothesis and reference.
pub fn count_chunks(alignment: &[(usize, usize)]) -> usize {
    if alignment.is_empty() {
        return 0;
    }
    1 + alignment
        .windows(2)
        .filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1))
        .count()
}

pub fn meteor_lite_score(hypothesis: &[String], reference: &[String], params: MeteorParams) -> f64 {
    let alignment = meteor_alignment(hypothesis, reference);
    let matches = alignment.len() as f64;
    if alignment.is_empty() {
        return 0.0;
    }
    let precision = matches / hypothesis.len() as f64;
    let recall = matches / reference.len() as f64;
    let f_mean = precision * recall / (params.alpha * precision + (1.0 - params.alpha) * recall);
    let frag = count_chunks(&alignment) as f64 / matches;
    let penalty = params.gamma * frag.powf(params.beta);
    f_mean * (1.0 - penalty)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Meteor {
    pub params: MeteorParams,
    pub tokenizer: Tokenizer,
}

impl Meteor {
    pub fn new(params: MeteorParams, tokenizer: Tokenizer) -> Result<Self> {
        let MeteorParams { alpha, beta, gamma } = params;
        if !(0.0..=1.0).contains(&alpha) || !(0.0..=1.0).contains(&gamma) || !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::Param(format!(
                "meteor needs alpha, gamma in [0, 1] and beta >= 0 (got {alpha}, {gamma}, {beta})"
            )));
        }
        Ok(Self { params, tokenizer: tokenizer.lowercased() })
    }

    /// Matching stages in use; the synonym stage is always off.
    pub fn stage_components() -> Components {
        [("stage_exact", 1.0), ("stage_stem", 1.0), ("stage_synonym", 0.0)]
            .into_iter()
            .map(|(k, v)| (k.to_owned(), v))
            .collect()
    }
}

impl Default for Meteor {
    fn default() -> Self {
        Self::new(MeteorParams::default(), Tokenizer::default()).expect("default parameters are valid")
    }
}

impl PairScorer for Meteor {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        let p = self.tokenizer.tokenize(prediction.as_text()?);
        let r = self.tokenizer.tokenize(reference.as_text()?);
        Ok(meteor_lite_score(&p, &r, self.params))
    }
}
