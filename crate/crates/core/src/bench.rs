//! Throughput benchmarks over a seeded synthetic corpus.
//!
//! Two experiments: input scaling (fixed metric pair, growing corpus) and
//! metric scaling (fixed corpus, metric ladder from 2 to 6, both run modes).
//! Repeats run one after another.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::collection::{validate_collection, EvaluationCollection, RawEntry};
use crate::error::{Error, Result};
use crate::params::Params;
use crate::registry::Registry;
use crate::scorer::{RunMode, Scorer, ScorerConfig};

pub const DEFAULT_SEED: u64 = 42;
pub const VOCABULARY_SIZE: usize = 1000;
pub const INPUT_SCALING_METRICS: [&str; 2] = ["bleu", "sacrebleu"];
pub const INPUT_SCALING_SIZES: [usize; 5] = [10, 100, 1_000, 10_000, 100_000];
pub const METRIC_LADDER: [&str; 6] = ["bleu", "sacrebleu", "meteor", "ter", "chrf", "google_bleu"];
pub const METRIC_SCALING_SIZE: usize = 10_000;
pub const DEFAULT_REPEATS: usize = 5;

const SYLLABLES: [&str; 20] = [
    "ka", "lo", "mi", "ne", "ru", "sa", "to", "vi", "de", "pa", "zu", "ho", "ri", "me", "no", "ta", "be", "gu", "si",
    "fe",
];

/// `VOCABULARY_SIZE` distinct pseudo-words.
pub fn vocabulary(rng: &mut impl Rng) -> Vec<String> {
    let mut seen = std::collections::HashSet::new();
    let mut words = Vec::with_capacity(VOCABULARY_SIZE);
    while words.len() < VOCABULARY_SIZE {
        let n = rng.gen_range(1..=4);
        let w: String = (0..n).map(|_| *SYLLABLES.choose(rng).expect("non-empty")).collect();
        if seen.insert(w.clone()) {
            words.push(w);
        }
    }
    words
}

/// `size` single-prediction, single-reference instances. References have
/// 5 to 25 tokens; each prediction is its reference with about a fifth of
/// the tokens substituted, dropped, or swapped with a neighbour.
pub fn synthetic_corpus(size: usize, seed: u64) -> Result<EvaluationCollection> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = vocabulary(&mut rng);
    let mut preds = Vec::with_capacity(size);
    let mut refs = Vec::with_capacity(size);
    for _ in 0..size {
        let len = rng.gen_range(5..=25);
        let reference: Vec<&str> = (0..len).map(|_| vocab[rng.gen_range(0..vocab.len())].as_str()).collect();
        let mut prediction = Vec::with_capacity(len);
        let mut i = 0;
        while i < len {
            match rng.gen_range(0..20) {
                0 | 1 => prediction.push(vocab[rng.gen_range(0..vocab.len())].as_str()),
                2 => {}
                3 if i + 1 < len => {
                    prediction.push(reference[i + 1]);
                    prediction.push(reference[i]);
                    i += 1;
                }
                _ => prediction.push(reference[i]),
            }
            i += 1;
        }
        preds.push(RawEntry::Text(prediction.join(" ")));
        refs.push(RawEntry::Text(reference.join(" ")));
    }
    validate_collection(preds, refs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Experiment {
    InputScaling,
    MetricScaling,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::InputScaling => "input-scaling",
            Experiment::MetricScaling => "metric-scaling",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub experiment: Experiment,
    pub run_mode: RunMode,
    pub input_size: usize,
    pub metric_count: usize,
    /// 1-based.
    pub run_index: usize,
    pub wall_seconds: f64,
    /// Instances per second.
    pub throughput: f64,
}

fn mode_name(mode: RunMode) -> &'static str {
    match mode {
        RunMode::Concurrent => "concurrent",
        RunMode::Sequential => "sequential",
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub seed: u64,
    pub repeats: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, repeats: DEFAULT_REPEATS }
    }
}

fn scorer(registry: &Registry, names: &[&str], mode: RunMode) -> Result<Scorer> {
    let metrics = names.iter().map(|n| registry.load_metric(n, &Params::new())).collect::<Result<Vec<_>>>()?;
    Scorer::new(ScorerConfig::new(metrics).run_mode(mode))
}

fn measure(
    experiment: Experiment,
    scorer: &Scorer,
    corpus: &EvaluationCollection,
    run_index: usize,
) -> Result<BenchRecord> {
    let (_, timings) = scorer.evaluate_timed(corpus)?;
    // A zero reading would make throughput infinite; clamp to one nanosecond.
    let wall_seconds = timings.wall_time.as_secs_f64().max(1e-9);
    Ok(BenchRecord {
        experiment,
        run_mode: scorer.config().run_mode,
        input_size: corpus.len(),
        metric_count: scorer.config().metrics.len(),
        run_index,
        wall_seconds,
        throughput: corpus.len() as f64 / wall_seconds,
    })
}

fn check_repeats(opts: &BenchOptions) -> Result<()> {
    if opts.repeats == 0 {
        return Err(Error::Config("repeats must be at least 1".into()));
    }
    Ok(())
}

pub fn run_input_scaling(sizes: &[usize], opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    check_repeats(opts)?;
    let registry = Registry::with_builtins();
    let scorer = scorer(&registry, &INPUT_SCALING_METRICS, RunMode::Concurrent)?;
    let mut out = Vec::new();
    for &size in sizes {
        let corpus = synthetic_corpus(size, opts.seed)?;
        for run in 1..=opts.repeats {
            out.push(measure(Experiment::InputScaling, &scorer, &corpus, run)?);
        }
    }
    Ok(out)
}

/// Metric counts run from 2 to `ladder.len()`; each count is measured in
/// both modes.
pub fn run_metric_scaling(ladder: &[&str], input_size: usize, opts: &BenchOptions) -> Result<Vec<BenchRecord>> {
    check_repeats(opts)?;
    let registry = Registry::with_builtins();
    let corpus = synthetic_corpus(input_size, opts.seed)?;
    let mut out = Vec::new();
    for mode in [RunMode::Concurrent, RunMode::Sequential] {
        for count in 2..=ladder.len() {
            let scorer = scorer(&registry, &ladder[..count], mode)?;
            for run in 1..=opts.repeats {
                out.push(measure(Experiment::MetricScaling, &scorer, &corpus, run)?);
            }
        }
    }
    Ok(out)
}

pub const CSV_HEADER: &str = "experiment,run_mode,input_size,metric_count,run_index,wall_seconds,throughput,log2_throughput";

/// CSV with a `# seed=<seed>` comment line before the header.
pub fn write_csv(mut w: impl Write, seed: u64, records: &[BenchRecord]) -> Result<()> {
    writeln!(w, "# seed={seed}")?;
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{:.6},{:.3},{:.6}",
            r.experiment.name(),
            mode_name(r.run_mode),
            r.input_size,
            r.metric_count,
            r.run_index,
            r.wall_seconds,
            r.throughput,
            r.throughput.log2()
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub experiment: Experiment,
    pub run_mode: RunMode,
    pub input_size: usize,
    pub metric_count: usize,
    pub runs: usize,
    pub mean_throughput: f64,
    pub mean_wall_seconds: f64,
}

/// Mean over repeats for each (experiment, mode, size, metric count), in
/// first-seen order.
pub fn summarize(records: &[BenchRecord]) -> Vec<SummaryRow> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(Experiment, bool, usize, usize), Vec<&BenchRecord>> = BTreeMap::new();
    for r in records {
        let key = (r.experiment, r.run_mode == RunMode::Sequential, r.input_size, r.metric_count);
        let g = groups.entry(key).or_default();
        if g.is_empty() {
            order.push(key);
        }
        g.push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let n = g.len() as f64;
            SummaryRow {
                experiment: key.0,
                run_mode: g[0].run_mode,
                input_size: key.2,
                metric_count: key.3,
                runs: g.len(),
                mean_throughput: g.iter().map(|r| r.throughput).sum::<f64>() / n,
                mean_wall_seconds: g.iter().map(|r| r.wall_seconds).sum::<f64>() / n,
            }
        })
        .collect()
}

pub fn write_summary(mut w: impl Write, rows: &[SummaryRow]) -> Result<()> {
    writeln!(w, "experiment,run_mode,input_size,metric_count,runs,mean_wall_seconds,mean_throughput,log2_mean_throughput")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{:.6},{:.3},{:.6}",
            r.experiment.name(),
            mode_name(r.run_mode),
            r.input_size,
            r.metric_count,
            r.runs,
            r.mean_wall_seconds,
            r.mean_throughput,
            r.mean_throughput.log2()
        )?;
    }
    Ok(())
}

/// Gnuplot script plotting log2 mean throughput from a summary CSV.
pub fn gnuplot_script(experiment: Experiment, summary_path: &str, image_path: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set terminal pngcairo size 800,500");
    let _ = writeln!(s, "set output '{image_path}'");
    let _ = writeln!(s, "set ylabel 'log2 throughput (items/s)'");
    let _ = writeln!(s, "set key left bottom");
    match experiment {
        Experiment::InputScaling => {
            let _ = writeln!(s, "set logscale x 10");
            let _ = writeln!(s, "set xlabel 'input size (instances)'");
            let _ = writeln!(
                s,
                "plot '{summary_path}' using (stringcolumn(1) eq 'input-scaling' ? $3 : 1/0):8 with linespoints title 'concurrent'"
            );
        }
        Experiment::MetricScaling => {
            let _ = writeln!(s, "set xlabel 'number of metrics'");
            let _ = writeln!(s, "set xtics 1");
            let _ = writeln!(
                s,
                "plot '{summary_path}' using (stringcolumn(2) eq 'concurrent' ? $4 : 1/0):8 with linespoints title 'concurrent', \\"
            );
            let _ = writeln!(
                s,
                "     '{summary_path}' using (stringcolumn(2) eq 'sequential' ? $4 : 1/0):8 with linespoints title 'sequential'"
            );
        }
    }
    s
}
