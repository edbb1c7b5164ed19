//! Entity-level F1 for BIO-tagged sequences.
//!
//! An entity is a maximal `B-X I-X ...` run. A predicted entity is a true
//! positive only when both its type and its exact span match a reference
//! entity. An `I-X` that does not follow `B-X` or `I-X` opens a new entity,
//! as if it were `B-X`; such repairs are counted in `repaired_tags`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::AddAssign;

use crate::collection::{Item, ReferenceInstance};
use crate::engine::CorpusStatistic;
use crate::error::{Error, Result};
use crate::metrics::classification::f1;
use crate::result::MetricResult;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entity {
    pub kind: String,
    pub start: usize,
    /// Exclusive.
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedTags {
    pub entities: Vec<Entity>,
    pub repaired: usize,
}

enum Tag<'a> {
    Outside,
    Begin(&'a str),
    Inside(&'a str),
}

fn parse_tag(tag: &str) -> Result<Tag<'_>> {
    if tag == "O" {
        return Ok(Tag::Outside);
    }
    match tag.split_once('-') {
        Some(("B", kind)) if !kind.is_empty() => Ok(Tag::Begin(kind)),
        Some(("I", kind)) if !kind.is_empty() => Ok(Tag::Inside(kind)),
        _ => Err(Error::Schema(format!("`{tag}` is not a BIO tag (O, B-<type> or I-<type>)"))),
    }
}

pub fn extract_entities(tags: &[String]) -> Result<ParsedTags> {
    let mut entities = Vec::new();
    let mut repaired = 0;
    let mut open: Option<(&str, usize)> = None;
    for (i, tag) in tags.iter().enumerate() {
        let tag = parse_tag(tag)?;
        let continues = matches!((&tag, open), (Tag::Inside(k), Some((o, _))) if *k == o);
        if continues {
            continue;
        }
        if let Some((kind, start)) = open.take() {
            entities.push(Entity { kind: kind.to_owned(), start, end: i });
        }
        match tag {
            Tag::Outside => {}
            Tag::Begin(kind) => open = Some((kind, i)),
            Tag::Inside(kind) => {
                repaired += 1;
                open = Some((kind, i));
            }
        }
    }
    if let Some((kind, start)) = open {
        entities.push(Entity { kind: kind.to_owned(), start, end: tags.len() });
    }
    Ok(ParsedTags { entities, repaired })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TypeCounts {
    pub tp: u64,
    pub predicted: u64,
    pub actual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SpanStats {
    pub per_type: BTreeMap<String, TypeCounts>,
    pub repaired: u64,
}

impl SpanStats {
    fn totals(&self) -> TypeCounts {
        self.per_type.values().fold(TypeCounts::default(), |a, c| TypeCounts {
            tp: a.tp + c.tp,
            predicted: a.predicted + c.predicted,
            actual: a.actual + c.actual,
        })
    }

    pub fn micro_f1(&self) -> f64 {
        let t = self.totals();
        let p = if t.predicted == 0 { 0.0 } else { t.tp as f64 / t.predicted as f64 };
        let r = if t.actual == 0 { 0.0 } else { t.tp as f64 / t.actual as f64 };
        f1(p, r)
    }
}

impl AddAssign<&SpanStats> for SpanStats {
    fn add_assign(&mut self, rhs: &SpanStats) {
        for (kind, c) in &rhs.per_type {
            let e = self.per_type.entry(kind.clone()).or_default();
            e.tp += c.tp;
            e.predicted += c.predicted;
            e.actual += c.actual;
        }
        self.repaired += rhs.repaired;
    }
}

/// Span statistics of one predicted tag sequence against one reference.
pub fn span_stats(prediction: &[String], reference: &[String]) -> Result<SpanStats> {
    if prediction.len() != reference.len() {
        return Err(Error::LengthMismatch {
            predictions: prediction.len(),
            references: reference.len(),
            context: " (tags in one sequence)".into(),
        });
    }
    let pred = extract_entities(prediction)?;
    let gold = extract_entities(reference)?;
    let gold_set: BTreeSet<&Entity> = gold.entities.iter().collect();
    let mut stats = SpanStats { repaired: (pred.repaired + gold.repaired) as u64, ..SpanStats::default() };
    for e in &pred.entities {
        let c = stats.per_type.entry(e.kind.clone()).or_default();
        c.predicted += 1;
        if gold_set.contains(e) {
            c.tp += 1;
        }
    }
    for e in &gold.entities {
        stats.per_type.entry(e.kind.clone()).or_default().actual += 1;
    }
    Ok(stats)
}

fn pair_score(s: &SpanStats) -> f64 {
    let t = s.totals();
    if t.predicted == 0 && t.actual == 0 {
        1.0
    } else {
        s.micro_f1()
    }
}

pub fn span_f1_result(pooled: &SpanStats) -> MetricResult {
    let t = pooled.totals();
    let precision = if t.predicted == 0 { 0.0 } else { t.tp as f64 / t.predicted as f64 };
    let recall = if t.actual == 0 { 0.0 } else { t.tp as f64 / t.actual as f64 };
    let mut r = MetricResult::new("seqeval", f1(precision, recall))
        .with("precision", precision)
        .with("recall", recall)
        .with("repaired_tags", pooled.repaired as f64);
    for (kind, c) in &pooled.per_type {
        let p = if c.predicted == 0 { 0.0 } else { c.tp as f64 / c.predicted as f64 };
        let rc = if c.actual == 0 { 0.0 } else { c.tp as f64 / c.actual as f64 };
        r = r
            .with(format!("{kind}.precision"), p)
            .with(format!("{kind}.recall"), rc)
            .with(format!("{kind}.f1"), f1(p, rc))
            .with(format!("{kind}.support"), c.actual as f64);
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SeqLabelF1;

impl CorpusStatistic for SeqLabelF1 {
    type Stats = SpanStats;

    /// Pairs the prediction with its best-scoring reference (first on ties).
    fn extract(&self, prediction: &Item, references: &ReferenceInstance) -> Result<SpanStats> {
        let p = prediction.as_tags()?;
        let mut best: Option<(f64, SpanStats)> = None;
        for r in references {
            let s = span_stats(p, r.as_tags()?)?;
            let score = pair_score(&s);
            if best.as_ref().is_none_or(|(b, _)| score > *b) {
                best = Some((score, s));
            }
        }
        Ok(best.expect("reference instances are non-empty").1)
    }

    fn provisional_score(&self, stats: &SpanStats) -> f64 {
        pair_score(stats)
    }

    fn finalize(&self, pooled: &SpanStats) -> Result<MetricResult> {
        Ok(span_f1_result(pooled))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tags(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    #[test]
    fn entities_and_repair() {
        let p = extract_entities(&tags("B-PER I-PER O I-LOC I-LOC B-ORG")).unwrap();
        assert_eq!(p.repaired, 1);
        let spans: Vec<_> = p.entities.iter().map(|e| (e.kind.as_str(), e.start, e.end)).collect();
        assert_eq!(spans, [("PER", 0, 2), ("LOC", 3, 5), ("ORG", 5, 6)]);
        // type switch inside a run is a repair too
        let p = extract_entities(&tags("B-PER I-LOC")).unwrap();
        assert_eq!(p.repaired, 1);
        assert_eq!(p.entities.len(), 2);
    }

    #[test]
    fn bad_tag_is_schema_error() {
        assert!(matches!(extract_entities(&tags("B-PER X")), Err(Error::Schema(_))));
        assert!(matches!(extract_entities(&tags("B-")), Err(Error::Schema(_))));
    }

    #[test]
    fn span_mismatch_is_not_a_hit() {
        let s = span_stats(&tags("B-PER I-PER O"), &tags("B-PER O O")).unwrap();
        assert_eq!(s.per_type["PER"], TypeCounts { tp: 0, predicted: 1, actual: 1 });
        assert_eq!(s.micro_f1(), 0.0);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(span_stats(&tags("O O"), &tags("O")), Err(Error::LengthMismatch { .. })));
    }
}
