//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchOptions, Experiment};
use crate::error::{Error, Result};
use crate::jsonl::load_collection;
use crate::params::{ParamValue, Params};
use crate::reduce::{CorpusReduce, Reduce, ReducePolicy};
use crate::registry::{LoadedMetric, Registry, TaskClass};
use crate::scorer::{Scorer, ScorerConfig, WorkerCap};

#[derive(Debug, Parser)]
#[command(name = "quorum", version, about = "Score predictions against references with many metrics at once")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a prediction file against a reference file.
    Eval(EvalArgs),
    /// Run a throughput benchmark on a synthetic corpus.
    Bench(BenchArgs),
    /// List bundled metrics with their tasks and parameters.
    Metrics,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// JSONL file, one prediction instance per line.
    #[arg(long)]
    pub predictions: PathBuf,
    /// JSONL file, one reference instance per line.
    #[arg(long)]
    pub references: PathBuf,
    /// Comma-separated metric names, e.g. `bleu,chrf`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub metrics: Vec<String>,
    /// Metric parameter as `<metric>.<name>=<value>`; repeatable.
    #[arg(long = "param", value_name = "METRIC.KEY=VALUE")]
    pub params: Vec<String>,
    /// Task bare metric names resolve in. Defaults to the metrics' own task.
    #[arg(long)]
    pub task: Option<String>,
    #[arg(long, default_value = "max")]
    pub reduce_ref: String,
    #[arg(long, default_value = "max")]
    pub reduce_pred: String,
    #[arg(long, default_value = "mean")]
    pub reduce_corpus: String,
    #[arg(long, default_value = "concurrent")]
    pub run_mode: String,
    /// Metric worker threads: `auto` or an integer.
    #[arg(long, default_value = "auto")]
    pub workers: String,
    /// Threads each metric may spread instances over.
    #[arg(long, default_value_t = 1)]
    pub instance_workers: usize,
    /// Report path; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Evaluate this many times and fail unless every report is identical.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchKind {
    InputScaling,
    MetricScaling,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    pub kind: BenchKind,
    /// Per-run CSV. A `.summary.csv` and a `.gp` script are written next to it.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = bench::DEFAULT_REPEATS)]
    pub repeats: usize,
    #[arg(long, default_value_t = bench::DEFAULT_SEED)]
    pub seed: u64,
    /// Input sizes for input scaling.
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Corpus size for metric scaling.
    #[arg(long, default_value_t = bench::METRIC_SCALING_SIZE)]
    pub input_size: usize,
}

/// Splits `metric.key=value`.
pub fn parse_param(raw: &str) -> Result<(String, String, ParamValue)> {
    let bad = || Error::Config(format!("parameter `{raw}` is not of the form <metric>.<key>=<value>"));
    let (lhs, value) = raw.split_once('=').ok_or_else(bad)?;
    let (metric, key) = lhs.split_once('.').ok_or_else(bad)?;
    if metric.is_empty() || key.is_empty() {
        return Err(bad());
    }
    Ok((metric.to_owned(), key.to_owned(), ParamValue::parse(value)))
}

fn same_name(a: &str, b: &str) -> bool {
    let norm = |s: &str| s.chars().filter(|c| *c != '-' && *c != '_').flat_map(char::to_lowercase).collect::<String>();
    norm(a) == norm(b)
}

pub fn resolve_metrics(registry: &Registry, names: &[String], raw_params: &[String], task: Option<TaskClass>) -> Result<Vec<LoadedMetric>> {
    let mut per_metric: Vec<Params> = vec![Params::new(); names.len()];
    for raw in raw_params {
        let (metric, key, value) = parse_param(raw)?;
        let i = names
            .iter()
            .position(|n| same_name(n, &metric))
            .ok_or_else(|| Error::Config(format!("parameter `{raw}` names a metric that is not being run")))?;
        per_metric[i].insert(key, value);
    }
    names
        .iter()
        .zip(&per_metric)
        .map(|(name, p)| match task {
            Some(t) => registry.load_for_task(name.trim(), p, t),
            None => registry.load_metric(name.trim(), p),
        })
        .collect()
}

pub fn build_scorer(registry: &Registry, args: &EvalArgs) -> Result<Scorer> {
    let task = args.task.as_deref().map(str::parse::<TaskClass>).transpose()?;
    let metrics = resolve_metrics(registry, &args.metrics, &args.params, task)?;
    let policy = ReducePolicy::new(
        args.reduce_ref.parse::<Reduce>()?,
        args.reduce_pred.parse::<Reduce>()?,
        args.reduce_corpus.parse::<CorpusReduce>()?,
    );
    let mut config = ScorerConfig::new(metrics)
        .run_mode(args.run_mode.parse()?)
        .worker_cap(args.workers.parse::<WorkerCap>()?)
        .policy(policy);
    config.instance_workers = args.instance_workers;
    let scorer = Scorer::new(config)?;
    if let Some(t) = task {
        if scorer.task() != t {
            let d = &scorer.config().metrics[0].descriptor();
            return Err(Error::TaskMismatch(vec![(d.base_name.clone(), d.task)]));
        }
    }
    Ok(scorer)
}

/// Runs an evaluation and returns the canonical report text.
pub fn run_eval(args: &EvalArgs) -> Result<String> {
    if args.repeat == 0 {
        return Err(Error::Config("repeat must be at least 1".into()));
    }
    let registry = Registry::with_builtins();
    let scorer = build_scorer(&registry, args)?;
    let collection = load_collection(&args.predictions, &args.references, scorer.task().payload_kind())?;
    let report = scorer.evaluate(&collection)?.to_canonical_json();
    for run in 2..=args.repeat {
        if scorer.evaluate(&collection)?.to_canonical_json() != report {
            return Err(Error::Config(format!("run {run} produced a different report")));
        }
    }
    match &args.output {
        Some(path) => fs::write(path, &report)?,
        None => std::io::stdout().write_all(report.as_bytes())?,
    }
    Ok(report)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "bench".into());
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn run_bench(args: &BenchArgs) -> Result<Vec<bench::BenchRecord>> {
    let opts = BenchOptions { seed: args.seed, repeats: args.repeats };
    let (experiment, records) = match args.kind {
        BenchKind::InputScaling => {
            let sizes = args.sizes.clone().unwrap_or_else(|| bench::INPUT_SCALING_SIZES.to_vec());
            (Experiment::InputScaling, bench::run_input_scaling(&sizes, &opts)?)
        }
        BenchKind::MetricScaling => {
            (Experiment::MetricScaling, bench::run_metric_scaling(&bench::METRIC_LADDER, args.input_size, &opts)?)
        }
    };
    bench::write_csv(fs::File::create(&args.out)?, args.seed, &records)?;
    let summary_path = sibling(&args.out, ".summary.csv");
    let summary = bench::summarize(&records);
    bench::write_summary(fs::File::create(&summary_path)?, &summary)?;
    let image = sibling(&args.out, ".png");
    fs::write(
        sibling(&args.out, ".gp"),
        bench::gnuplot_script(experiment, &summary_path.to_string_lossy(), &image.to_string_lossy()),
    )?;
    for row in &summary {
        eprintln!(
            "{} {:>10} size={:<6} metrics={} throughput={:.1}/s",
            row.experiment.name(),
            format!("{:?}", row.run_mode).to_lowercase(),
            row.input_size,
            row.metric_count,
            row.mean_throughput
        );
    }
    Ok(records)
}

pub fn list_metrics(mut w: impl Write) -> Result<()> {
    let registry = Registry::with_builtins();
    for d in registry.descriptors() {
        let params: Vec<String> = d.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(w, "{:<12} {:<24} {}", d.base_name, d.task, params.join(" "))?;
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Eval(args) => run_eval(&args).map(drop),
        Command::Bench(args) => run_bench(&args).map(drop),
        Command::Metrics => list_metrics(std::io::stdout().lock()),
    }
}
