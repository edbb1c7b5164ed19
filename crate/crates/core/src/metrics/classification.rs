//! Multi-class precision, recall and F1 from a pooled confusion table.
//!
//! Each instance contributes one (prediction, reference) label pair. With
//! several references, a prediction is paired with the first reference it
//! matches, or with the first reference when it matches none. With several
//! predictions, `pred_reduce` over the 0/1 match indicator picks one.
//!
//! A class that is never predicted has precision 0; the component
//! `<class>.precision_undefined` is set to 1 for it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::AddAssign;
use std::str::FromStr;

use crate::collection::{Item, ReferenceInstance};
use crate::engine::CorpusStatistic;
use crate::error::{Error, Result};
use crate::result::MetricResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Averaging {
    Micro,
    #[default]
    Macro,
    Weighted,
}

impl FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "micro" => Ok(Averaging::Micro),
            "macro" => Ok(Averaging::Macro),
            "weighted" => Ok(Averaging::Weighted),
            _ => Err(Error::Param(format!("unknown averaging `{s}` (expected micro, macro or weighted)"))),
        }
    }
}

impl fmt::Display for Averaging {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Averaging::Micro => "micro",
            Averaging::Macro => "macro",
            Averaging::Weighted => "weighted",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassCounts {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
}

impl ClassCounts {
    pub fn support(&self) -> u64 {
        self.tp + self.fn_
    }
}

/// Per-class confusion counts, keyed by label.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Confusion(pub BTreeMap<i64, ClassCounts>);

impl Confusion {
    pub fn record(&mut self, predicted: i64, actual: i64) {
        if predicted == actual {
            self.0.entry(actual).or_default().tp += 1;
        } else {
            self.0.entry(predicted).or_default().fp += 1;
            self.0.entry(actual).or_default().fn_ += 1;
        }
    }
}

impl AddAssign<&Confusion> for Confusion {
    fn add_assign(&mut self, rhs: &Confusion) {
        for (label, c) in &rhs.0 {
            let e = self.0.entry(*label).or_default();
            e.tp += c.tp;
            e.fp += c.fp;
            e.fn_ += c.fn_;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassQuantity {
    Precision,
    Recall,
    F1,
}

impl ClassQuantity {
    pub fn name(self) -> &'static str {
        match self {
            ClassQuantity::Precision => "precision",
            ClassQuantity::Recall => "recall",
            ClassQuantity::F1 => "f1",
        }
    }
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub(crate) fn f1(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn get(&self, q: ClassQuantity) -> f64 {
        match q {
            ClassQuantity::Precision => self.precision,
            ClassQuantity::Recall => self.recall,
            ClassQuantity::F1 => self.f1,
        }
    }

    fn from_counts(tp: u64, predicted: u64, actual: u64) -> Self {
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, actual);
        Prf { precision, recall, f1: f1(precision, recall) }
    }
}

/// Averaged P/R/F1 plus per-class values in `components`.
pub fn precision_recall_f1(confusion: &Confusion, averaging: Averaging) -> (Prf, BTreeMap<String, f64>) {
    let mut components = BTreeMap::new();
    let per_class: Vec<(i64, Prf, u64)> = confusion
        .0
        .iter()
        .map(|(&label, c)| (label, Prf::from_counts(c.tp, c.tp + c.fp, c.support()), c.support()))
        .collect();
    for ((label, prf, support), c) in per_class.iter().zip(confusion.0.values()) {
        components.insert(format!("{label}.precision"), prf.precision);
        components.insert(format!("{label}.recall"), prf.recall);
        components.insert(format!("{label}.f1"), prf.f1);
        components.insert(format!("{label}.support"), *support as f64);
        if c.tp + c.fp == 0 {
            components.insert(format!("{label}.precision_undefined"), 1.0);
        }
    }

    let avg = match averaging {
        Averaging::Micro => {
            let tp: u64 = confusion.0.values().map(|c| c.tp).sum();
            let fp: u64 = confusion.0.values().map(|c| c.fp).sum();
            let fn_: u64 = confusion.0.values().map(|c| c.fn_).sum();
            Prf::from_counts(tp, tp + fp, tp + fn_)
        }
        Averaging::Macro | Averaging::Weighted => {
            let present: Vec<&(i64, Prf, u64)> = per_class.iter().filter(|(_, _, s)| *s > 0).collect();
            let weight = |s: u64| if averaging == Averaging::Macro { 1.0 } else { s as f64 };
            let total: f64 = present.iter().map(|(_, _, s)| weight(*s)).sum();
            let avg_of = |q: ClassQuantity| {
                if total == 0.0 {
                    0.0
                } else {
                    present.iter().map(|(_, prf, s)| weight(*s) * prf.get(q)).sum::<f64>() / total
                }
            };
            Prf {
                precision: avg_of(ClassQuantity::Precision),
                recall: avg_of(ClassQuantity::Recall),
                f1: avg_of(ClassQuantity::F1),
            }
        }
    };
    (avg, components)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationPrf {
    pub quantity: ClassQuantity,
    pub averaging: Averaging,
}

impl CorpusStatistic for ClassificationPrf {
    type Stats = Confusion;

    fn extract(&self, prediction: &Item, references: &ReferenceInstance) -> Result<Confusion> {
        let p = prediction.as_label()?;
        let refs: Vec<i64> = references.iter().map(Item::as_label).collect::<Result<_>>()?;
        let actual = refs.iter().copied().find(|&r| r == p).unwrap_or(refs[0]);
        let mut c = Confusion::default();
        c.record(p, actual);
        Ok(c)
    }

    fn provisional_score(&self, stats: &Confusion) -> f64 {
        if stats.0.values().any(|c| c.tp > 0) {
            1.0
        } else {
            0.0
        }
    }

    fn finalize(&self, pooled: &Confusion) -> Result<MetricResult> {
        let (avg, components) = precision_recall_f1(pooled, self.averaging);
        let mut r = MetricResult::new(self.quantity.name(), avg.get(self.quantity));
        r.components = components;
        Ok(r
            .with("precision", avg.precision)
            .with("recall", avg.recall)
            .with("f1", avg.f1))
    }
}
