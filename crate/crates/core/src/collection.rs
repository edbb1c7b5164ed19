//! Evaluation instances and collections.
//!
//! A collection pairs, per data point, a non-empty list of predictions with a
//! non-empty list of references. The two lists need not have the same length.
//! Every item in a collection carries the same payload kind; this is checked
//! once at construction and never re-checked afterwards.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PayloadKind {
    Text,
    ClassLabel,
    LabelSequence,
}

impl fmt::Display for PayloadKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PayloadKind::Text => "text",
            PayloadKind::ClassLabel => "class_label",
            PayloadKind::LabelSequence => "label_sequence",
        })
    }
}

/// One prediction or reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Item {
    Text(String),
    Label(i64),
    Tags(Vec<String>),
}

impl Item {
    pub fn kind(&self) -> PayloadKind {
        match self {
            Item::Text(_) => PayloadKind::Text,
            Item::Label(_) => PayloadKind::ClassLabel,
            Item::Tags(_) => PayloadKind::LabelSequence,
        }
    }

    pub fn as_text(&self) -> Result<&str> {
        match self {
            Item::Text(s) => Ok(s),
            other => Err(kind_error(PayloadKind::Text, other.kind())),
        }
    }

    pub fn as_label(&self) -> Result<i64> {
        match self {
            Item::Label(l) => Ok(*l),
            other => Err(kind_error(PayloadKind::ClassLabel, other.kind())),
        }
    }

    pub fn as_tags(&self) -> Result<&[String]> {
        match self {
            Item::Tags(t) => Ok(t),
            other => Err(kind_error(PayloadKind::LabelSequence, other.kind())),
        }
    }
}

fn kind_error(expected: PayloadKind, found: PayloadKind) -> Error {
    Error::Schema(format!("expected {expected} payload, found {found}"))
}

/// Ordered, non-empty, kind-uniform list of items. Used for both sides of an
/// evaluation instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceItems {
    items: Vec<Item>,
}

pub type PredictionInstance = InstanceItems;
pub type ReferenceInstance = InstanceItems;

impl InstanceItems {
    pub fn new(items: Vec<Item>) -> Result<Self> {
        let first = items
            .first()
            .ok_or_else(|| Error::Schema("instance must hold at least one item".into()))?;
        let kind = first.kind();
        if let Some(bad) = items.iter().find(|it| it.kind() != kind) {
            return Err(Error::Schema(format!(
                "mixed payload kinds inside one instance ({kind} and {})",
                bad.kind()
            )));
        }
        Ok(Self { items })
    }

    pub fn kind(&self) -> PayloadKind {
        self.items[0].kind()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Item> {
        self.items.iter()
    }
}

impl<'a> IntoIterator for &'a InstanceItems {
    type Item = &'a Item;
    type IntoIter = std::slice::Iter<'a, Item>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationInstance {
    pub predictions: PredictionInstance,
    pub references: ReferenceInstance,
}

impl EvaluationInstance {
    pub fn new(predictions: PredictionInstance, references: ReferenceInstance) -> Result<Self> {
        if predictions.kind() != references.kind() {
            return Err(Error::Schema(format!(
                "predictions are {} but references are {}",
                predictions.kind(),
                references.kind()
            )));
        }
        Ok(Self { predictions, references })
    }

    pub fn kind(&self) -> PayloadKind {
        self.predictions.kind()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationCollection {
    kind: PayloadKind,
    instances: Vec<EvaluationInstance>,
}

impl EvaluationCollection {
    pub fn new(instances: Vec<EvaluationInstance>) -> Result<Self> {
        let first = instances
            .first()
            .ok_or_else(|| Error::Schema("collection must hold at least one instance".into()))?;
        let kind = first.kind();
        if let Some((i, bad)) = instances.iter().enumerate().find(|(_, inst)| inst.kind() != kind) {
            return Err(Error::Schema(format!(
                "instance {i} is {} but the collection is {kind}",
                bad.kind()
            )));
        }
        Ok(Self { kind, instances })
    }

    pub fn kind(&self) -> PayloadKind {
        self.kind
    }

    pub fn instances(&self) -> &[EvaluationInstance] {
        &self.instances
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Splits back into raw list-shaped entries. Feeding the result to
    /// [`validate_collection`] yields an equal collection.
    pub fn to_raw(&self) -> (Vec<RawEntry>, Vec<RawEntry>) {
        self.instances
            .iter()
            .map(|inst| (RawEntry::from_items(&inst.predictions), RawEntry::from_items(&inst.references)))
            .unzip()
    }
}

/// Unvalidated input for one side of one instance, as it arrives from a
/// caller or a JSONL line. Scalars are promoted to singleton instances.
#[derive(Debug, Clone, PartialEq)]
pub enum RawEntry {
    Text(String),
    TextList(Vec<String>),
    Label(i64),
    LabelList(Vec<i64>),
    Tags(Vec<String>),
    TagsList(Vec<Vec<String>>),
}

impl RawEntry {
    fn kind(&self) -> PayloadKind {
        match self {
            RawEntry::Text(_) | RawEntry::TextList(_) => PayloadKind::Text,
            RawEntry::Label(_) | RawEntry::LabelList(_) => PayloadKind::ClassLabel,
            RawEntry::Tags(_) | RawEntry::TagsList(_) => PayloadKind::LabelSequence,
        }
    }

    fn into_items(self) -> Result<InstanceItems> {
        let items: Vec<Item> = match self {
            RawEntry::Text(s) => vec![Item::Text(s)],
            RawEntry::TextList(v) => v.into_iter().map(Item::Text).collect(),
            RawEntry::Label(l) => vec![Item::Label(l)],
            RawEntry::LabelList(v) => v.into_iter().map(Item::Label).collect(),
            RawEntry::Tags(t) => vec![Item::Tags(t)],
            RawEntry::TagsList(v) => v.into_iter().map(Item::Tags).collect(),
        };
        InstanceItems::new(items)
    }

    fn from_items(items: &InstanceItems) -> RawEntry {
        match items.kind() {
            PayloadKind::Text => RawEntry::TextList(
                items.iter().map(|it| it.as_text().expect("uniform kind").to_owned()).collect(),
            ),
            PayloadKind::ClassLabel => {
                RawEntry::LabelList(items.iter().map(|it| it.as_label().expect("uniform kind")).collect())
            }
            PayloadKind::LabelSequence => RawEntry::TagsList(
                items.iter().map(|it| it.as_tags().expect("uniform kind").to_vec()).collect(),
            ),
        }
    }
}

impl From<&str> for RawEntry {
    fn from(s: &str) -> Self {
        RawEntry::Text(s.to_owned())
    }
}

impl From<String> for RawEntry {
    fn from(s: String) -> Self {
        RawEntry::Text(s)
    }
}

impl From<Vec<&str>> for RawEntry {
    fn from(v: Vec<&str>) -> Self {
        RawEntry::TextList(v.into_iter().map(str::to_owned).collect())
    }
}

impl From<i64> for RawEntry {
    fn from(l: i64) -> Self {
        RawEntry::Label(l)
    }
}

/// Checks shapes and kinds of raw prediction/reference lists and builds a
/// collection. Line `i` of predictions pairs with line `i` of references.
pub fn validate_collection(raw_predictions: Vec<RawEntry>, raw_references: Vec<RawEntry>) -> Result<EvaluationCollection> {
    if raw_predictions.len() != raw_references.len() {
        return Err(Error::LengthMismatch {
            predictions: raw_predictions.len(),
            references: raw_references.len(),
            context: String::new(),
        });
    }
    if raw_predictions.is_empty() {
        return Err(Error::Schema("no instances given".into()));
    }
    let kind = raw_predictions[0].kind();
    let mut instances = Vec::with_capacity(raw_predictions.len());
    for (i, (p, r)) in raw_predictions.into_iter().zip(raw_references).enumerate() {
        for (side, entry) in [("prediction", &p), ("reference", &r)] {
            if entry.kind() != kind {
                return Err(Error::Schema(format!(
                    "{side} {i} is {} but the collection is {kind}",
                    entry.kind()
                )));
            }
        }
        let at = |e: Error| match e {
            Error::Schema(msg) => Error::Schema(format!("instance {i}: {msg}")),
            other => other,
        };
        let predictions = p.into_items().map_err(at)?;
        let references = r.into_items().map_err(at)?;
        instances.push(EvaluationInstance { predictions, references });
    }
    Ok(EvaluationCollection { kind, instances })
}

/// Number of instances whose every prediction is empty or whitespace-only.
/// Non-text collections have no empty items.
pub fn count_empty(collection: &EvaluationCollection) -> usize {
    if collection.kind() != PayloadKind::Text {
        return 0;
    }
    collection
        .instances()
        .iter()
        .filter(|inst| {
            inst.predictions
                .iter()
                .all(|it| matches!(it, Item::Text(s) if s.trim().is_empty()))
        })
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(v: &[&str]) -> RawEntry {
        RawEntry::TextList(v.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn scalar_promotion() {
        let c = validate_collection(vec!["a".into()], vec!["a".into()]).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.instances()[0].predictions.len(), 1);
        assert_eq!(c.instances()[0].references.len(), 1);
        assert_eq!(c.kind(), PayloadKind::Text);
    }

    #[test]
    fn ragged_instances() {
        let c = validate_collection(
            vec!["a".into(), texts(&["b", "c"])],
            vec![texts(&["x", "y"]), "z".into()],
        )
        .unwrap();
        let shape: Vec<_> = c
            .instances()
            .iter()
            .map(|i| (i.predictions.len(), i.references.len()))
            .collect();
        assert_eq!(shape, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn top_level_length_mismatch() {
        let err = validate_collection(vec!["a".into()], vec!["x".into(), "y".into()]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { predictions: 1, references: 2, .. }));
    }

    #[test]
    fn mixed_kinds_rejected() {
        let err = validate_collection(vec!["a".into(), RawEntry::Label(1)], vec!["x".into(), "y".into()]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        let err = validate_collection(vec!["a".into()], vec![RawEntry::LabelList(vec![1])]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        assert!(InstanceItems::new(vec![Item::Text("a".into()), Item::Label(2)]).is_err());
    }

    #[test]
    fn empty_inner_list_rejected() {
        let err = validate_collection(vec![RawEntry::TextList(vec![])], vec!["x".into()]).unwrap_err();
        assert!(matches!(err, Error::Schema(_)));
        assert!(matches!(validate_collection(vec![], vec![]), Err(Error::Schema(_))));
    }

    #[test]
    fn validation_is_idempotent() {
        let c = validate_collection(
            vec!["a".into(), texts(&["b", "c"]), "".into()],
            vec![texts(&["x", "y"]), "z".into(), "w".into()],
        )
        .unwrap();
        let (p, r) = c.to_raw();
        assert_eq!(validate_collection(p, r).unwrap(), c);
    }

    #[test]
    fn empty_counting() {
        let c = validate_collection(vec!["".into()], vec!["ref".into()]).unwrap();
        assert_eq!(count_empty(&c), 1);
        let c = validate_collection(vec!["hi".into()], vec!["ref".into()]).unwrap();
        assert_eq!(count_empty(&c), 0);
        let c = validate_collection(vec![texts(&["", "  "]), texts(&["", "x"])], vec!["ref".into(), "ref".into()]).unwrap();
        assert_eq!(count_empty(&c), 1);
    }
}
