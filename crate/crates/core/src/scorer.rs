//! Combined evaluation of several same-task metrics over one collection.

use std::collections::HashSet;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use crate::collection::{count_empty, EvaluationCollection};
use crate::error::{Error, Result};
use crate::reduce::ReducePolicy;
use crate::registry::{LoadedMetric, MetricDescriptor, TaskClass};
use crate::result::{EvaluationReport, MetricResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    #[default]
    Concurrent,
    Sequential,
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "concurrent" => Ok(RunMode::Concurrent),
            "sequential" => Ok(RunMode::Sequential),
            _ => Err(Error::Config(format!("unknown run mode `{s}` (concurrent or sequential)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WorkerCap {
    /// `min(metric count, available cores)`.
    #[default]
    Auto,
    Fixed(usize),
}

impl FromStr for WorkerCap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(WorkerCap::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(WorkerCap::Fixed(n)),
            _ => Err(Error::Config(format!("worker cap must be `auto` or an integer >= 1, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScorerConfig {
    pub metrics: Vec<LoadedMetric>,
    pub run_mode: RunMode,
    pub worker_cap: WorkerCap,
    pub policy: ReducePolicy,
    /// Threads each metric may use across instances. 1 disables it.
    pub instance_workers: usize,
}

impl ScorerConfig {
    pub fn new(metrics: Vec<LoadedMetric>) -> Self {
        Self {
            metrics,
            run_mode: RunMode::default(),
            worker_cap: WorkerCap::default(),
            policy: ReducePolicy::default(),
            instance_workers: 1,
        }
    }

    pub fn run_mode(mut self, mode: RunMode) -> Self {
        self.run_mode = mode;
        self
    }

    pub fn worker_cap(mut self, cap: WorkerCap) -> Self {
        self.worker_cap = cap;
        self
    }

    pub fn policy(mut self, policy: ReducePolicy) -> Self {
        self.policy = policy;
        self
    }
}

/// Passes iff all descriptors share one task.
pub fn check_task_compatibility(metrics: &[MetricDescriptor]) -> Result<TaskClass> {
    let first = metrics
        .first()
        .ok_or_else(|| Error::Config("a scorer needs at least one metric".into()))?;
    if metrics.iter().all(|d| d.task == first.task) {
        return Ok(first.task);
    }
    // Name the metrics outside the majority task (first task on ties).
    let mut counts: Vec<(TaskClass, usize)> = Vec::new();
    for d in metrics {
        match counts.iter_mut().find(|(t, _)| *t == d.task) {
            Some((_, n)) => *n += 1,
            None => counts.push((d.task, 1)),
        }
    }
    let majority = counts.iter().fold(counts[0], |best, &c| if c.1 > best.1 { c } else { best }).0;
    Err(Error::TaskMismatch(
        metrics
            .iter()
            .filter(|d| d.task != majority)
            .map(|d| (d.base_name.clone(), d.task))
            .collect(),
    ))
}

pub struct Timings {
    pub wall_time: Duration,
    /// In configuration order.
    pub per_metric: Vec<Duration>,
}

#[derive(Debug, Clone)]
pub struct Scorer {
    config: ScorerConfig,
    task: TaskClass,
}

impl Scorer {
    pub fn new(config: ScorerConfig) -> Result<Self> {
        let descriptors: Vec<MetricDescriptor> = config.metrics.iter().map(|m| m.descriptor().clone()).collect();
        let task = check_task_compatibility(&descriptors)?;
        let mut seen = HashSet::new();
        for m in &config.metrics {
            if !seen.insert(m.name()) {
                return Err(Error::Config(format!("metric `{}` appears twice in one report", m.name())));
            }
        }
        if let WorkerCap::Fixed(0) = config.worker_cap {
            return Err(Error::Config("worker cap must be at least 1".into()));
        }
        if config.instance_workers == 0 {
            return Err(Error::Config("instance workers must be at least 1".into()));
        }
        Ok(Self { config, task })
    }

    pub fn config(&self) -> &ScorerConfig {
        &self.config
    }

    pub fn task(&self) -> TaskClass {
        self.task
    }

    fn workers(&self) -> usize {
        let n = self.config.metrics.len();
        match (self.config.run_mode, self.config.worker_cap) {
            (RunMode::Sequential, _) => 1,
            (RunMode::Concurrent, WorkerCap::Fixed(cap)) => cap.min(n),
            (RunMode::Concurrent, WorkerCap::Auto) => {
                n.min(thread::available_parallelism().map_or(1, |p| p.get()))
            }
        }
    }

    pub fn evaluate(&self, collection: &EvaluationCollection) -> Result<EvaluationReport> {
        self.evaluate_timed(collection).map(|(report, _)| report)
    }

    pub fn evaluate_timed(&self, collection: &EvaluationCollection) -> Result<(EvaluationReport, Timings)> {
        let wanted = self.task.payload_kind();
        if collection.kind() != wanted {
            return Err(Error::Schema(format!(
                "task {} expects {wanted} input, got {}",
                self.task,
                collection.kind()
            )));
        }
        let start = Instant::now();
        let outcomes = self.run_all(collection);
        let wall_time = start.elapsed();

        let mut results = Vec::with_capacity(outcomes.len());
        let mut per_metric = Vec::with_capacity(outcomes.len());
        for (metric, (outcome, took)) in self.config.metrics.iter().zip(outcomes) {
            match outcome {
                Some(Ok(r)) => results.push(r),
                Some(Err(e)) => {
                    return Err(Error::MetricFailed { metric: metric.name().to_owned(), source: Box::new(e) })
                }
                None => unreachable!("every metric slot is filled before a successful join"),
            }
            per_metric.push(took);
        }
        let report = EvaluationReport { total_items: collection.len(), empty_items: count_empty(collection), results };
        Ok((report, Timings { wall_time, per_metric }))
    }

    /// Runs every metric; slot `i` holds metric `i`'s outcome. After a
    /// failure, metrics not yet started are skipped, so the lowest failing
    /// index is always reported regardless of scheduling.
    fn run_all(&self, collection: &EvaluationCollection) -> Vec<(Option<Result<MetricResult>>, Duration)> {
        let metrics = &self.config.metrics;
        let run_one = |i: usize| {
            let t = Instant::now();
            let r = metrics[i].compute_with(collection, &self.config.policy, self.config.instance_workers);
            (r, t.elapsed())
        };
        let workers = self.workers();
        if workers <= 1 {
            let mut out = Vec::with_capacity(metrics.len());
            let mut failed = false;
            for i in 0..metrics.len() {
                if failed {
                    out.push((None, Duration::ZERO));
                    continue;
                }
                let (r, took) = run_one(i);
                failed = r.is_err();
                out.push((Some(r), took));
            }
            return truncate_after_failure(out);
        }

        let slots: Vec<Mutex<(Option<Result<MetricResult>>, Duration)>> =
            (0..metrics.len()).map(|_| Mutex::new((None, Duration::ZERO))).collect();
        let next = AtomicUsize::new(0);
        let first_failure = AtomicUsize::new(usize::MAX);
        thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= metrics.len() || i > first_failure.load(Ordering::Acquire) {
                        break;
                    }
                    let (r, took) = run_one(i);
                    if r.is_err() {
                        first_failure.fetch_min(i, Ordering::AcqRel);
                    }
                    *slots[i].lock().expect("slot lock") = (Some(r), took);
                });
            }
        });
        truncate_after_failure(slots.into_iter().map(|m| m.into_inner().expect("slot lock")).collect())
    }
}

/// Keeps everything up to and including the first failure; the caller stops there.
fn truncate_after_failure(
    mut out: Vec<(Option<Result<MetricResult>>, Duration)>,
) -> Vec<(Option<Result<MetricResult>>, Duration)> {
    if let Some(i) = out.iter().position(|(r, _)| matches!(r, Some(Err(_)))) {
        out.truncate(i + 1);
    }
    out
}
