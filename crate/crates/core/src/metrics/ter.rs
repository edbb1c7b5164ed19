//! Translation edit rate.
//!
//! Edits are insertions, deletions, substitutions and phrase shifts, divided
//! by the reference length. Shifts are found greedily: at every step all
//! candidate phrase moves are tried and the one that lowers the word-level
//! edit distance the most is applied, until no move helps. A candidate moves
//! a hypothesis phrase that also occurs in the reference, is not already
//! aligned, and lands next to the hypothesis word aligned with the matching
//! reference position.

use std::collections::HashMap;

use crate::collection::Item;
use crate::engine::PairScorer;
use crate::error::{Error, Result};
use crate::reduce::Polarity;
use crate::text::Tokenizer;

const MAX_SHIFT_SIZE: usize = 10;
const MAX_SHIFT_DIST: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TerEdits {
    /// Word edits left after shifting, plus one per shift.
    pub edits: usize,
    pub shifts: usize,
    pub reference_len: usize,
}

impl TerEdits {
    pub fn score(&self) -> Result<f64> {
        if self.reference_len == 0 {
            return Err(Error::DegenerateInput("TER needs a non-empty reference".into()));
        }
        Ok(self.edits as f64 / self.reference_len as f64)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    Match,
    Sub,
    /// Extra hypothesis word.
    Ins,
    /// Reference word missing from the hypothesis.
    Del,
}

fn edit_distance(hyp: &[u32], reference: &[u32], row: &mut Vec<usize>) -> usize {
    row.clear();
    row.extend(0..=reference.len());
    for (i, h) in hyp.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, r) in reference.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if h == r { diag } else { 1 + diag.min(up).min(row[j]) };
            diag = up;
        }
    }
    row[reference.len()]
}

struct Alignment {
    distance: usize,
    hyp_err: Vec<bool>,
    ref_err: Vec<bool>,
    /// Hypothesis index aligned with each reference position; -1 before the start.
    ref_to_hyp: Vec<isize>,
}

fn align(hyp: &[u32], reference: &[u32]) -> Alignment {
    let (n, m) = (hyp.len(), reference.len());
    let w = m + 1;
    let mut d = vec![0usize; (n + 1) * w];
    for (j, cell) in d[..w].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=n {
        d[i * w] = i;
        for j in 1..=m {
            let diag = d[(i - 1) * w + j - 1] + usize::from(hyp[i - 1] != reference[j - 1]);
            d[i * w + j] = diag.min(d[(i - 1) * w + j] + 1).min(d[i * w + j - 1] + 1);
        }
    }

    let mut ops = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        if i > 0 && j > 0 {
            let same = hyp[i - 1] == reference[j - 1];
            if here == d[(i - 1) * w + j - 1] + usize::from(!same) {
                ops.push(if same { Op::Match } else { Op::Sub });
                i -= 1;
                j -= 1;
                continue;
            }
        }
        if j > 0 && here == d[i * w + j - 1] + 1 {
            ops.push(Op::Del);
            j -= 1;
        } else {
            ops.push(Op::Ins);
            i -= 1;
        }
    }
    ops.reverse();

    let mut hyp_err = Vec::with_capacity(n);
    let mut ref_err = Vec::with_capacity(m);
    let mut ref_to_hyp = Vec::with_capacity(m);
    let mut hyp_pos: isize = -1;
    for op in ops {
        match op {
            Op::Match | Op::Sub => {
                hyp_pos += 1;
                let err = op == Op::Sub;
                hyp_err.push(err);
                ref_err.push(err);
                ref_to_hyp.push(hyp_pos);
            }
            Op::Ins => {
                hyp_pos += 1;
                hyp_err.push(true);
            }
            Op::Del => {
                ref_err.push(true);
                ref_to_hyp.push(hyp_pos);
            }
        }
    }
    Alignment { distance: d[n * w + m], hyp_err, ref_err, ref_to_hyp }
}

/// Moves `hyp[start..start + len]` so that it precedes the word originally at `target`.
fn perform_shift(hyp: &[u32], start: usize, len: usize, target: usize) -> Vec<u32> {
    let mut rest: Vec<u32> = Vec::with_capacity(hyp.len());
    rest.extend_from_slice(&hyp[..start]);
    rest.extend_from_slice(&hyp[start + len..]);
    let at = if target > start { target - len } else { target };
    let mut out = Vec::with_capacity(hyp.len());
    out.extend_from_slice(&rest[..at]);
    out.extend_from_slice(&hyp[start..start + len]);
    out.extend_from_slice(&rest[at..]);
    out
}

/// Best single shift as (new hypothesis, new distance), if any lowers the distance.
fn best_shift(hyp: &[u32], reference: &[u32], row: &mut Vec<usize>) -> Option<(Vec<u32>, usize)> {
    let a = align(hyp, reference);
    let mut best: Option<(Vec<u32>, usize)> = None;
    for hs in 0..hyp.len() {
        for rs in 0..reference.len() {
            if hs.abs_diff(rs) > MAX_SHIFT_DIST {
                continue;
            }
            let mut len = 0;
            while len < MAX_SHIFT_SIZE
                && hs + len < hyp.len()
                && rs + len < reference.len()
                && hyp[hs + len] == reference[rs + len]
            {
                len += 1;
                if !a.hyp_err[hs..hs + len].iter().any(|&e| e) || !a.ref_err[rs..rs + len].iter().any(|&e| e) {
                    continue;
                }
                let aligned = a.ref_to_hyp[rs];
                if aligned >= hs as isize && aligned < (hs + len) as isize {
                    continue;
                }
                let mut prev_target = None;
                for offset in -1..len as isize {
                    let pos = rs as isize + offset;
                    let target = if pos < 0 { 0 } else { (a.ref_to_hyp[pos as usize] + 1) as usize };
                    if prev_target == Some(target) {
                        continue;
                    }
                    prev_target = Some(target);
                    if (hs..=hs + len).contains(&target) {
                        continue;
                    }
                    let shifted = perform_shift(hyp, hs, len, target);
                    let dist = edit_distance(&shifted, reference, row);
                    let current_best = best.as_ref().map_or(a.distance, |b| b.1);
                    if dist < current_best {
                        best = Some((shifted, dist));
                    }
                }
            }
        }
    }
    best
}

pub fn ter_edits<'a, T: Eq + std::hash::Hash>(hypothesis: &'a [T], reference: &'a [T]) -> TerEdits {
    let mut ids: HashMap<&'a T, u32> = HashMap::new();
    let mut intern = |t: &'a T| -> u32 {
        let next = ids.len() as u32;
        *ids.entry(t).or_insert(next)
    };
    let reference_ids: Vec<u32> = reference.iter().map(&mut intern).collect();
    let mut hyp: Vec<u32> = hypothesis.iter().map(&mut intern).collect();

    let mut row = Vec::new();
    let mut shifts = 0;
    let mut distance = edit_distance(&hyp, &reference_ids, &mut row);
    while distance > 0 {
        match best_shift(&hyp, &reference_ids, &mut row) {
            Some((shifted, d)) => {
                hyp = shifted;
                distance = d;
                shifts += 1;
            }
            None => break,
        }
    }
    TerEdits { edits: distance + shifts, shifts, reference_len: reference.len() }
}

pub fn ter_score(hypothesis: &[String], reference: &[String]) -> Result<f64> {
    ter_edits(hypothesis, reference).score()
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ter {
    pub tokenizer: Tokenizer,
}

impl PairScorer for Ter {
    fn score_pair(&self, prediction: &Item, reference: &Item) -> Result<f64> {
        let p = self.tokenizer.tokenize(prediction.as_text()?);
        let r = self.tokenizer.tokenize(reference.as_text()?);
        ter_score(&p, &r)
    }

    fn polarity(&self) -> Polarity {
        Polarity::LowerIsBetter
    }
}
