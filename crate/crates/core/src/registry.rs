//! Metric lookup by name with task mapping.
//!
//! A metric is registered per task under a base name. It can be loaded as
//! `<base>-for-<task>` or as a bare `<base>`; a bare name resolves to the
//! language-generation variant when there is one, else to the only task the
//! metric is registered for. Names are matched case-insensitively and
//! ignoring `-` and `_`, so `rougeL`, `rouge-l` and `ROUGE_L` are the same.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::collection::{EvaluationCollection, PayloadKind};
use crate::engine::PairScorer;
use crate::error::{Error, Result};
use crate::metrics::accuracy::{LabelAccuracy, TextAccuracy};
use crate::metrics::bleu::{Bleu, Smoothing};
use crate::metrics::chrf::Chrf;
use crate::metrics::classification::{Averaging, ClassQuantity, ClassificationPrf};
use crate::metrics::gleu::Gleu;
use crate::metrics::meteor::{Meteor, MeteorParams};
use crate::metrics::rouge::{Rouge, RougeVariant};
use crate::metrics::seqlabel::SeqLabelF1;
use crate::metrics::ter::Ter;
use crate::metrics::{CorpusScored, InstanceScored, Metric};
use crate::params::{get_bool, get_f64, get_str, get_usize, ParamValue, Params};
use crate::reduce::ReducePolicy;
use crate::result::MetricResult;
use crate::text::{Tokenizer, TokenizerMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TaskClass {
    LanguageGeneration,
    SequenceClassification,
    SequenceLabeling,
    CrossLingualEvaluation,
}

impl TaskClass {
    pub const ALL: [TaskClass; 4] = [
        TaskClass::LanguageGeneration,
        TaskClass::SequenceClassification,
        TaskClass::SequenceLabeling,
        TaskClass::CrossLingualEvaluation,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            TaskClass::LanguageGeneration => "language-generation",
            TaskClass::SequenceClassification => "sequence-classification",
            TaskClass::SequenceLabeling => "sequence-labeling",
            TaskClass::CrossLingualEvaluation => "cross-lingual-evaluation",
        }
    }

    /// Payload kind a collection must have to be scored under this task.
    pub fn payload_kind(self) -> PayloadKind {
        match self {
            TaskClass::LanguageGeneration | TaskClass::CrossLingualEvaluation => PayloadKind::Text,
            TaskClass::SequenceClassification => PayloadKind::ClassLabel,
            TaskClass::SequenceLabeling => PayloadKind::LabelSequence,
        }
    }
}

impl fmt::Display for TaskClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for TaskClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = normalize(s);
        TaskClass::ALL
            .into_iter()
            .find(|t| normalize(t.slug()) == key)
            .ok_or_else(|| Error::Config(format!("unknown task `{s}`")))
    }
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !matches!(c, '-' | '_' | ' '))
        .flat_map(char::to_lowercase)
        .collect()
}

fn split_task_suffix(name: &str) -> Result<(String, Option<TaskClass>)> {
    let lowered = name.to_lowercase().replace('_', "-");
    match lowered.split_once("-for-") {
        Some((base, task)) => Ok((normalize(base), Some(task.parse()?))),
        None => Ok((normalize(name), None)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricMode {
    InstanceScored,
    CorpusStatistic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricDescriptor {
    pub base_name: String,
    pub task: TaskClass,
    /// Full parameter set: defaults merged with caller overrides. At
    /// registration, the keys here are the parameters the metric accepts.
    pub params: Params,
    pub mode: MetricMode,
}

impl MetricDescriptor {
    pub fn new(base_name: impl Into<String>, task: TaskClass, mode: MetricMode) -> Self {
        Self { base_name: base_name.into(), task, params: Params::new(), mode }
    }

    pub fn with_param(mut self, key: impl Into<String>, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn qualified_name(&self) -> String {
        format!("{}-for-{}", self.base_name, self.task)
    }
}

pub type MetricFactory = Arc<dyn Fn(&Params) -> Result<Arc<dyn Metric>> + Send + Sync>;

struct Entry {
    template: MetricDescriptor,
    /// Parameters shown in the descriptor that callers may not override.
    locked: Vec<&'static str>,
    factory: MetricFactory,
}

/// A metric ready to run, with the descriptor it was loaded from.
#[derive(Clone)]
pub struct LoadedMetric {
    descriptor: MetricDescriptor,
    implementation: Arc<dyn Metric>,
}

impl fmt::Debug for LoadedMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LoadedMetric").field("descriptor", &self.descriptor).finish_non_exhaustive()
    }
}

impl LoadedMetric {
    pub fn descriptor(&self) -> &MetricDescriptor {
        &self.descriptor
    }

    pub fn name(&self) -> &str {
        &self.descriptor.base_name
    }

    pub fn implementation(&self) -> &Arc<dyn Metric> {
        &self.implementation
    }

    pub fn pair_scorer(&self) -> Option<&dyn PairScorer> {
        self.implementation.pair_scorer()
    }

    pub fn compute(&self, collection: &EvaluationCollection, policy: &ReducePolicy) -> Result<MetricResult> {
        self.compute_with(collection, policy, 1)
    }

    pub fn compute_with(&self, collection: &EvaluationCollection, policy: &ReducePolicy, instance_workers: usize) -> Result<MetricResult> {
        let wanted = self.descriptor.task.payload_kind();
        if collection.kind() != wanted {
            return Err(Error::Schema(format!(
                "{} expects {wanted} input, got {}",
                self.descriptor.qualified_name(),
                collection.kind()
            )));
        }
        let mut result = self.implementation.compute(collection, policy, instance_workers)?;
        result.metric_name = self.descriptor.base_name.clone();
        if !result.score.is_finite() || result.components.values().any(|v| !v.is_finite()) {
            return Err(Error::DegenerateInput(format!("{} produced a non-finite value", self.name())));
        }
        Ok(result)
    }
}

#[derive(Default)]
pub struct Registry {
    entries: Vec<Entry>,
    index: HashMap<(String, TaskClass), usize>,
}

impl Registry {
    /// Empty registry.
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding every bundled metric.
    pub fn with_builtins() -> Self {
        let mut r = Self::new();
        register_builtins(&mut r);
        r
    }

    pub fn register_metric<F>(&mut self, descriptor: MetricDescriptor, factory: F) -> Result<()>
    where
        F: Fn(&Params) -> Result<Arc<dyn Metric>> + Send + Sync + 'static,
    {
        self.insert(descriptor, Vec::new(), Arc::new(factory))
    }

    /// Registers a fixed instance-scored metric from a pair scorer.
    pub fn register_pair_metric<S>(&mut self, descriptor: MetricDescriptor, scorer: S) -> Result<()>
    where
        S: PairScorer + 'static,
    {
        let metric: Arc<dyn Metric> = Arc::new(InstanceScored::new(scorer));
        self.register_metric(descriptor, move |_| Ok(metric.clone()))
    }

    fn insert(&mut self, template: MetricDescriptor, locked: Vec<&'static str>, factory: MetricFactory) -> Result<()> {
        let key = (normalize(&template.base_name), template.task);
        if key.0.is_empty() {
            return Err(Error::Config("metric name must not be empty".into()));
        }
        if self.index.contains_key(&key) {
            return Err(Error::DuplicateRegistration { metric: template.base_name, task: template.task });
        }
        self.index.insert(key, self.entries.len());
        self.entries.push(Entry { template, locked, factory });
        Ok(())
    }

    pub fn descriptors(&self) -> impl Iterator<Item = &MetricDescriptor> {
        self.entries.iter().map(|e| &e.template)
    }

    fn tasks_for(&self, base: &str) -> Vec<TaskClass> {
        let mut tasks: Vec<TaskClass> = TaskClass::ALL
            .into_iter()
            .filter(|t| self.index.contains_key(&(base.to_owned(), *t)))
            .collect();
        tasks.sort();
        tasks
    }

    fn resolve(&self, name: &str, default_task: Option<TaskClass>) -> Result<&Entry> {
        let (base, task) = split_task_suffix(name)?;
        let tasks = self.tasks_for(&base);
        if tasks.is_empty() {
            return Err(Error::UnknownMetric(name.to_owned()));
        }
        let task = match task.or(default_task) {
            Some(t) => t,
            None if tasks.contains(&TaskClass::LanguageGeneration) => TaskClass::LanguageGeneration,
            None if tasks.len() == 1 => tasks[0],
            None => {
                return Err(Error::AmbiguousMetric {
                    metric: name.to_owned(),
                    tasks: tasks.iter().map(|t| t.slug()).collect::<Vec<_>>().join(", "),
                })
            }
        };
        self.index
            .get(&(base, task))
            .map(|&i| &self.entries[i])
            .ok_or_else(|| Error::TaskUnavailable { metric: name.to_owned(), task })
    }

    pub fn load_metric(&self, name: &str, params: &Params) -> Result<LoadedMetric> {
        self.load(name, params, None)
    }

    /// Like [`load_metric`](Self::load_metric), but a bare name resolves
    /// within `task`. An explicit `-for-<task>` suffix still wins.
    pub fn load_for_task(&self, name: &str, params: &Params, task: TaskClass) -> Result<LoadedMetric> {
        self.load(name, params, Some(task))
    }

    fn load(&self, name: &str, params: &Params, task: Option<TaskClass>) -> Result<LoadedMetric> {
        let entry = self.resolve(name, task)?;
        let mut descriptor = entry.template.clone();
        for (key, value) in params {
            if entry.locked.contains(&key.as_str()) {
                return Err(Error::Param(format!(
                    "`{key}` is fixed to `{}` for {}",
                    entry.template.params[key], entry.template.base_name
                )));
            }
            match descriptor.params.get_mut(key) {
                Some(slot) => *slot = value.clone(),
                None => {
                    return Err(Error::UnknownParam { metric: entry.template.base_name.clone(), param: key.clone() })
                }
            }
        }
        let implementation = (entry.factory)(&descriptor.params)?;
        Ok(LoadedMetric { descriptor, implementation })
    }
}

fn tokenizer_from(p: &Params) -> Result<Tokenizer> {
    Ok(Tokenizer { mode: get_str(p, "tokenizer")?.parse()?, normalize: get_bool(p, "normalize")?, lowercase: false })
}

fn with_tokenizer(d: MetricDescriptor) -> MetricDescriptor {
    d.with_param("tokenizer", "whitespace").with_param("normalize", true)
}

fn order_param(p: &Params, key: &str) -> Result<usize> {
    let n = get_usize(p, key)?;
    if n == 0 {
        return Err(Error::Param(format!("`{key}` must be at least 1")));
    }
    Ok(n)
}

fn instance<S: PairScorer + 'static>(s: S) -> Arc<dyn Metric> {
    Arc::new(InstanceScored::new(s))
}

fn register_builtins(r: &mut Registry) {
    use MetricMode::{CorpusStatistic as Corpus, InstanceScored as Inst};
    use TaskClass::*;

    let mut add = |d: MetricDescriptor, locked: Vec<&'static str>, f: MetricFactory| {
        r.insert(d, locked, f).expect("bundled metric names are unique");
    };

    add(
        with_tokenizer(MetricDescriptor::new("bleu", LanguageGeneration, Corpus))
            .with_param("max_order", 4i64)
            .with_param("smoothing", "none")
            .with_param("smoothing_k", 1.0),
        vec![],
        Arc::new(|p| {
            let bleu = Bleu {
                max_order: order_param(p, "max_order")?,
                tokenizer: tokenizer_from(p)?,
                smoothing: Smoothing::parse(get_str(p, "smoothing")?, get_f64(p, "smoothing_k")?)?,
                empty_scores_zero: false,
            };
            Ok(Arc::new(CorpusScored(bleu)) as Arc<dyn Metric>)
        }),
    );
    add(
        MetricDescriptor::new("sacrebleu", LanguageGeneration, Corpus)
            .with_param("max_order", 4i64)
            .with_param("tokenizer", TokenizerMode::Intl.to_string().as_str())
            .with_param("smoothing", "exp"),
        vec!["tokenizer", "smoothing"],
        Arc::new(|p| Ok(Arc::new(CorpusScored(Bleu::sacre(order_param(p, "max_order")?))) as Arc<dyn Metric>)),
    );
    add(
        with_tokenizer(MetricDescriptor::new("google_bleu", LanguageGeneration, Inst))
            .with_param("min_order", 1i64)
            .with_param("max_order", 4i64),
        vec![],
        Arc::new(|p| {
            let (min_order, max_order) = (order_param(p, "min_order")?, order_param(p, "max_order")?);
            if min_order > max_order {
                return Err(Error::Param(format!("min_order {min_order} exceeds max_order {max_order}")));
            }
            Ok(instance(Gleu { min_order, max_order, tokenizer: tokenizer_from(p)? }))
        }),
    );
    add(
        with_tokenizer(MetricDescriptor::new("meteor", LanguageGeneration, Inst))
            .with_param("alpha", 0.9)
            .with_param("beta", 3.0)
            .with_param("gamma", 0.5),
        vec![],
        Arc::new(|p| {
            let params = MeteorParams { alpha: get_f64(p, "alpha")?, beta: get_f64(p, "beta")?, gamma: get_f64(p, "gamma")? };
            let meteor = Meteor::new(params, tokenizer_from(p)?)?;
            Ok(Arc::new(InstanceScored::new(meteor).with_components(Meteor::stage_components())) as Arc<dyn Metric>)
        }),
    );
    for (name, variant) in [("rouge1", RougeVariant::N(1)), ("rouge2", RougeVariant::N(2)), ("rougeL", RougeVariant::L)] {
        add(
            with_tokenizer(MetricDescriptor::new(name, LanguageGeneration, Inst)),
            vec![],
            Arc::new(move |p| Ok(instance(Rouge { variant, tokenizer: tokenizer_from(p)? }))),
        );
    }
    add(
        MetricDescriptor::new("chrf", LanguageGeneration, Inst)
            .with_param("char_order", 6i64)
            .with_param("word_order", 0i64)
            .with_param("beta", 2.0),
        vec![],
        Arc::new(|p| {
            let chrf = Chrf::new(get_usize(p, "char_order")?, get_usize(p, "word_order")?, get_f64(p, "beta")?)?;
            Ok(instance(chrf))
        }),
    );
    add(
        with_tokenizer(MetricDescriptor::new("ter", LanguageGeneration, Inst)),
        vec![],
        Arc::new(|p| Ok(instance(Ter { tokenizer: tokenizer_from(p)? }))),
    );
    add(
        with_tokenizer(MetricDescriptor::new("accuracy", LanguageGeneration, Inst)),
        vec![],
        Arc::new(|p| Ok(instance(TextAccuracy { tokenizer: tokenizer_from(p)? }))),
    );

    add(
        MetricDescriptor::new("accuracy", SequenceClassification, Inst),
        vec![],
        Arc::new(|_| Ok(instance(LabelAccuracy))),
    );
    for quantity in [ClassQuantity::Precision, ClassQuantity::Recall, ClassQuantity::F1] {
        add(
            MetricDescriptor::new(quantity.name(), SequenceClassification, Corpus).with_param("average", "macro"),
            vec![],
            Arc::new(move |p| {
                let averaging: Averaging = get_str(p, "average")?.parse()?;
                Ok(Arc::new(CorpusScored(ClassificationPrf { quantity, averaging })) as Arc<dyn Metric>)
            }),
        );
    }

    add(
        MetricDescriptor::new("seqeval", SequenceLabeling, Corpus),
        vec![],
        Arc::new(|_| Ok(Arc::new(CorpusScored(SeqLabelF1)) as Arc<dyn Metric>)),
    );
}
