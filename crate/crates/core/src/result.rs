use std::collections::BTreeMap;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

/// Auxiliary values reported next to a score. Sorted by key.
pub type Components = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricResult {
    #[serde(skip)]
    pub metric_name: String,
    pub score: f64,
    pub components: Components,
}

impl MetricResult {
    pub fn new(metric_name: impl Into<String>, score: f64) -> Self {
        Self { metric_name: metric_name.into(), score, components: Components::new() }
    }

    pub fn with(mut self, key: impl Into<String>, value: f64) -> Self {
        self.components.insert(key.into(), value);
        self
    }
}

/// Output of one scorer run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport {
    pub total_items: usize,
    pub empty_items: usize,
    /// In scorer configuration order.
    pub results: Vec<MetricResult>,
}

impl EvaluationReport {
    pub fn get(&self, metric_name: &str) -> Option<&MetricResult> {
        self.results.iter().find(|r| r.metric_name == metric_name)
    }

    /// Canonical JSON: `total_items`, `empty_items`, then one object per
    /// metric in configuration order; component keys are sorted. Identical
    /// reports always serialize to identical bytes.
    pub fn to_canonical_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report values are finite");
        out.push('\n');
        out
    }
}

impl Serialize for EvaluationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(2 + self.results.len()))?;
        map.serialize_entry("total_items", &self.total_items)?;
        map.serialize_entry("empty_items", &self.empty_items)?;
        for r in &self.results {
            map.serialize_entry(&r.metric_name, r)?;
        }
        map.end()
    }
}
