//! Brute-force reference implementations and the worked examples they check.
//!
//! Nothing here calls into the library's own n-gram, LCS, edit-distance,
//! alignment or reduce code; each oracle is the most literal version of its
//! definition, written for clarity rather than speed.

#![allow(dead_code)]

use std::collections::BTreeSet;

use quorum::metrics::bleu::{bleu_finalize, bleu_instance_stats, Smoothing};
use quorum::metrics::classification::{precision_recall_f1, Averaging, Confusion};
use quorum::metrics::meteor::{count_chunks, meteor_alignment, meteor_lite_score, MeteorParams};
use quorum::metrics::seqlabel::{extract_entities, span_f1_result, span_stats};
use quorum::metrics::ter::ter_score;
use quorum::text::{Tokenizer, TokenizerMode};
use quorum::{
    params, validate_collection, CorpusReduce, EvaluationCollection, Item, Params, RawEntry, Reduce, ReducePolicy,
    Registry,
};

pub const ALL_TOKENIZERS: [TokenizerMode; 3] = [TokenizerMode::Whitespace, TokenizerMode::Intl, TokenizerMode::Char];

pub fn words(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_owned).collect()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

// ---------------------------------------------------------------------------
// The three-stage reduce as three literal loops

/// Triple loop over instances, predictions and references. `lower_is_better`
/// flips which end of the range "max" picks.
pub fn triple_loop_oracle(
    instances: &[(Vec<Item>, Vec<Item>)],
    pair: impl Fn(&Item, &Item) -> f64,
    policy: ReducePolicy,
    lower_is_better: bool,
) -> f64 {
    let reduce = |values: &[f64], how: Reduce| -> f64 {
        let mut best = values[0];
        let mut worst = values[0];
        let mut sum = 0.0;
        for &v in values {
            sum += v;
            let v_beats_best = if lower_is_better { v < best } else { v > best };
            let v_worse = if lower_is_better { v > worst } else { v < worst };
            if v_beats_best {
                best = v;
            }
            if v_worse {
                worst = v;
            }
        }
        match how {
            Reduce::Max => best,
            Reduce::Min => worst,
            Reduce::Mean => sum / values.len() as f64,
        }
    };
    let mut all = Vec::new();
    for (preds, refs) in instances {
        let mut per_pred = Vec::new();
        for p in preds {
            let mut per_ref = Vec::new();
            for r in refs {
                per_ref.push(pair(p, r));
            }
            per_pred.push(reduce(&per_ref, policy.ref_reduce));
        }
        all.push(reduce(&per_pred, policy.pred_reduce));
    }
    let total: f64 = all.iter().sum();
    match policy.corpus_reduce {
        CorpusReduce::Sum => total,
        CorpusReduce::Mean | CorpusReduce::MetricDefined => total / all.len() as f64,
    }
}

pub fn collection_from(instances: &[(Vec<Item>, Vec<Item>)]) -> EvaluationCollection {
    let entry = |items: &[Item]| match &items[0] {
        Item::Text(_) => RawEntry::TextList(items.iter().map(|i| i.as_text().unwrap().to_owned()).collect()),
        Item::Label(_) => RawEntry::LabelList(items.iter().map(|i| i.as_label().unwrap()).collect()),
        Item::Tags(_) => RawEntry::TagsList(items.iter().map(|i| i.as_tags().unwrap().to_vec()).collect()),
    };
    validate_collection(
        instances.iter().map(|(p, _)| entry(p)).collect(),
        instances.iter().map(|(_, r)| entry(r)).collect(),
    )
    .unwrap()
}

pub fn all_policies() -> Vec<ReducePolicy> {
    let mut out = Vec::new();
    for r in [Reduce::Max, Reduce::Mean, Reduce::Min] {
        for p in [Reduce::Max, Reduce::Mean, Reduce::Min] {
            for c in [CorpusReduce::Mean, CorpusReduce::Sum] {
                out.push(ReducePolicy::new(r, p, c));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Counting oracles

/// All contiguous n-grams, as owned vectors, in order of appearance.
pub fn ngrams(tokens: &[String], n: usize) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut i = 0;
    while i + n <= tokens.len() {
        out.push(tokens[i..i + n].to_vec());
        i += 1;
    }
    out
}

fn occurrences(list: &[Vec<String>], g: &[String]) -> usize {
    list.iter().filter(|x| x.as_slice() == g).count()
}

/// (clipped matches, candidate n-gram count) with clipping by the maximum
/// count in any single reference.
pub fn clipped_counts(candidate: &[String], references: &[Vec<String>], n: usize) -> (usize, usize) {
    let cand = ngrams(candidate, n);
    let distinct: BTreeSet<Vec<String>> = cand.iter().cloned().collect();
    let mut matches = 0;
    for g in &distinct {
        let in_cand = occurrences(&cand, g);
        let ceiling = references.iter().map(|r| occurrences(&ngrams(r, n), g)).max().unwrap_or(0);
        matches += in_cand.min(ceiling);
    }
    (matches, cand.len())
}

/// Corpus BLEU without smoothing from hand-pooled counts, skipping orders
/// with no candidate n-grams.
pub fn bleu_oracle(corpus: &[(&str, Vec<&str>)], max_order: usize) -> f64 {
    let mut matches = vec![0usize; max_order];
    let mut totals = vec![0usize; max_order];
    let (mut c, mut r) = (0usize, 0usize);
    for (pred, refs) in corpus {
        let p = words(pred);
        let rs: Vec<Vec<String>> = refs.iter().map(|x| words(x)).collect();
        for n in 1..=max_order {
            let (m, t) = clipped_counts(&p, &rs, n);
            matches[n - 1] += m;
            totals[n - 1] += t;
        }
        c += p.len();
        // closest reference length, shorter wins ties
        let mut best = rs[0].len();
        for x in &rs {
            let d = x.len().abs_diff(p.len());
            let bd = best.abs_diff(p.len());
            if d < bd || (d == bd && x.len() < best) {
                best = x.len();
            }
        }
        r += best;
    }
    let mut log_sum = 0.0;
    let mut used = 0;
    for n in 0..max_order {
        if totals[n] == 0 {
            continue;
        }
        if matches[n] == 0 {
            return 0.0;
        }
        log_sum += (matches[n] as f64 / totals[n] as f64).ln();
        used += 1;
    }
    let bp = if c >= r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * (log_sum / used as f64).exp()
}

/// Longest common subsequence by trying every subsequence of `a`. Only for
/// short inputs.
pub fn lcs_oracle(a: &[String], b: &[String]) -> usize {
    assert!(a.len() <= 16);
    let is_subsequence = |sub: &[&String]| {
        let mut it = b.iter();
        sub.iter().all(|s| it.any(|x| x == *s))
    };
    let mut best = 0;
    for mask in 0u32..(1 << a.len()) {
        let sub: Vec<&String> = (0..a.len()).filter(|i| mask & (1 << i) != 0).map(|i| &a[i]).collect();
        if sub.len() > best && is_subsequence(&sub) {
            best = sub.len();
        }
    }
    best
}

/// Word-level Levenshtein distance, plain recursion with memo.
pub fn levenshtein_oracle(a: &[String], b: &[String]) -> usize {
    fn go(a: &[String], b: &[String], i: usize, j: usize, memo: &mut Vec<Vec<Option<usize>>>) -> usize {
        if let Some(v) = memo[i][j] {
            return v;
        }
        let v = if i == a.len() {
            b.len() - j
        } else if j == b.len() {
            a.len() - i
        } else {
            let sub = go(a, b, i + 1, j + 1, memo) + usize::from(a[i] != b[j]);
            let del = go(a, b, i + 1, j, memo) + 1;
            let ins = go(a, b, i, j + 1, memo) + 1;
            sub.min(del).min(ins)
        };
        memo[i][j] = Some(v);
        v
    }
    let mut memo = vec![vec![None; b.len() + 1]; a.len() + 1];
    go(a, b, 0, 0, &mut memo)
}

/// Minimum over "no shift" and every single block move of the hypothesis of
/// (shifts + Levenshtein distance), divided by the reference length.
pub fn single_shift_ter_oracle(hyp: &[String], reference: &[String]) -> f64 {
    let mut best = levenshtein_oracle(hyp, reference);
    for start in 0..hyp.len() {
        for len in 1..=hyp.len() - start {
            let block = &hyp[start..start + len];
            let rest: Vec<String> = hyp[..start].iter().chain(&hyp[start + len..]).cloned().collect();
            for at in 0..=rest.len() {
                let moved: Vec<String> = rest[..at].iter().chain(block).chain(&rest[at..]).cloned().collect();
                if moved != hyp {
                    best = best.min(1 + levenshtein_oracle(&moved, reference));
                }
            }
        }
    }
    best as f64 / reference.len() as f64
}

/// Character n-gram F-beta, averaged over orders where both sides have n-grams.
pub fn chrf_oracle(pred: &str, reference: &str, max_order: usize, beta: f64) -> f64 {
    let p: Vec<String> = pred.chars().filter(|c| !c.is_whitespace()).map(String::from).collect();
    let r: Vec<String> = reference.chars().filter(|c| !c.is_whitespace()).map(String::from).collect();
    let mut scores = Vec::new();
    for n in 1..=max_order {
        let (m, pt) = clipped_counts(&p, std::slice::from_ref(&r), n);
        let rt = ngrams(&r, n).len();
        if pt == 0 || rt == 0 {
            continue;
        }
        let (prec, rec) = (m as f64 / pt as f64, m as f64 / rt as f64);
        let b2 = beta * beta;
        scores.push(if prec + rec == 0.0 { 0.0 } else { (1.0 + b2) * prec * rec / (b2 * prec + rec) });
    }
    scores.iter().sum::<f64>() / scores.len() as f64
}

/// Number of maximal runs in an alignment where both sides advance by one.
pub fn chunk_oracle(alignment: &[(usize, usize)]) -> usize {
    let mut chunks = 0;
    for (i, &(h, r)) in alignment.iter().enumerate() {
        let continues = i > 0 && alignment[i - 1] == (h.wrapping_sub(1), r.wrapping_sub(1));
        if !continues {
            chunks += 1;
        }
    }
    chunks
}

/// Entities as (type, start, end) straight from the BIO definition, with an
/// orphan `I-X` starting a new entity.
pub fn spans_oracle(tags: &[&str]) -> Vec<(String, usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < tags.len() {
        let t = tags[i];
        if t == "O" {
            i += 1;
            continue;
        }
        let kind = &t[2..];
        let mut j = i + 1;
        while j < tags.len() && tags[j] == format!("I-{kind}") {
            j += 1;
        }
        out.push((kind.to_owned(), i, j));
        i = j;
    }
    out
}

// ---------------------------------------------------------------------------
// Worked examples

pub type Check = (String, Result<(), String>);

fn check(name: &str, ok: bool, detail: impl FnOnce() -> String) -> Check {
    (name.to_owned(), if ok { Ok(()) } else { Err(detail()) })
}

fn approx(name: &str, got: f64, want: f64, tol: f64) -> Check {
    check(name, close(got, want, tol), || format!("got {got}, want {want}"))
}

fn load(name: &str, p: Params) -> quorum::LoadedMetric {
    Registry::with_builtins().load_metric(name, &p).unwrap()
}

fn run_metric(name: &str, preds: Vec<RawEntry>, refs: Vec<RawEntry>) -> quorum::Result<quorum::MetricResult> {
    let c = validate_collection(preds, refs)?;
    load(name, Params::new()).compute(&c, &ReducePolicy::default())
}

fn text_pair(name: &str, pred: &str, reference: &str) -> f64 {
    run_metric(name, vec![pred.into()], vec![reference.into()]).unwrap().score
}

/// Every worked example with a computed expectation, checked against the
/// oracles above.
pub fn derived_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let ws = Tokenizer::new(TokenizerMode::Whitespace);

    // engine: (mean, mean) over [[0.2, 0.8], [0.5, 0.4]]
    {
        let m = [[0.2, 0.8], [0.5, 0.4]];
        let items = |p: &str, n: usize| (0..n).map(|i| Item::Text(format!("{p}{i}"))).collect::<Vec<_>>();
        let inst = vec![(items("p", 2), items("r", 2))];
        let pair = |p: &Item, r: &Item| {
            let i: usize = p.as_text().unwrap()[1..].parse().unwrap();
            let j: usize = r.as_text().unwrap()[1..].parse().unwrap();
            m[i][j]
        };
        let policy = ReducePolicy::new(Reduce::Mean, Reduce::Mean, CorpusReduce::Mean);
        let engine = quorum::score_collection(
            &collection_from(&inst),
            &|p: &Item, r: &Item| Ok(pair(p, r)),
            &policy,
        )
        .unwrap();
        out.push(approx("engine: mean/mean score matrix = 0.475", engine, triple_loop_oracle(&inst, pair, policy, false), 1e-12));
        out.push(approx("engine: mean/mean oracle = 0.475", triple_loop_oracle(&inst, pair, policy, false), 0.475, 1e-12));
    }

    // BLEU clipping
    {
        let s = bleu_instance_stats("the the the", &["the cat"], 4, &ws);
        let (m1, t1) = clipped_counts(&words("the the the"), &[words("the cat")], 1);
        let (m2, t2) = clipped_counts(&words("the the the"), &[words("the cat")], 2);
        out.push(check(
            "bleu: \"the the the\" vs \"the cat\" clips to 1/3 and 0/2",
            (s.matches[0], s.totals[0], s.matches[1], s.totals[1]) == (m1 as u64, t1 as u64, m2 as u64, t2 as u64)
                && (m1, t1, m2, t2) == (1, 3, 0, 2),
            || format!("stats {s:?}, oracle {:?}", (m1, t1, m2, t2)),
        ));
    }

    // BLEU brevity penalty, candidate 2 vs effective reference 4
    {
        let s = bleu_instance_stats("a b", &["a b c d"], 2, &ws);
        let r = bleu_finalize(&s, 2, Smoothing::None).unwrap();
        out.push(approx("bleu: brevity penalty e^(1-4/2)", r.components["brevity_penalty"], (1.0f64 - 4.0 / 2.0).exp(), 1e-15));
    }

    // BLEU pooled corpus vs counting oracle
    {
        let corpus: Vec<(&str, Vec<&str>)> = vec![
            ("the cat sat on the mat", vec!["the cat sat on the mat", "a cat is on the mat"]),
            ("a dog ran in the park today", vec!["the dog ran in the park"]),
            ("he read the the book", vec!["he read a book", "he has read the book"]),
            ("it is raining again", vec!["it is raining"]),
            ("we went home early after the show", vec!["after the show we went home", "we left the show early"]),
        ];
        let got = run_metric(
            "bleu",
            corpus.iter().map(|(p, _)| (*p).into()).collect(),
            corpus.iter().map(|(_, r)| r.clone().into()).collect(),
        )
        .unwrap()
        .score;
        out.push(approx("bleu: 5-instance corpus equals pooled counting oracle", got, bleu_oracle(&corpus, 4), 1e-12));
        let toy = &corpus[..3];
        let got = run_metric(
            "bleu",
            toy.iter().map(|(p, _)| (*p).into()).collect(),
            toy.iter().map(|(_, r)| r.clone().into()).collect(),
        )
        .unwrap()
        .score;
        out.push(approx("bleu: 3-instance toy corpus equals pooled counting oracle", got, bleu_oracle(toy, 4), 1e-12));
    }

    // sacrebleu vs whitespace BLEU on punctuation
    {
        let plain = text_pair("bleu", "hi!", "hi !");
        let sacre = text_pair("sacrebleu", "hi!", "hi !");
        out.push(check("sacrebleu: \"hi!\" vs \"hi !\" differs from whitespace bleu", sacre == 1.0 && plain < 1.0, || {
            format!("sacrebleu {sacre}, bleu {plain}")
        }));
    }

    // GLEU enumeration
    {
        let p = words("the cat");
        let r = words("the cat sat");
        let count = |max_n: usize| {
            let mut m = 0;
            let (mut tp, mut tr) = (0, 0);
            for n in 1..=max_n {
                m += clipped_counts(&p, std::slice::from_ref(&r), n).0;
                tp += ngrams(&p, n).len();
                tr += ngrams(&r, n).len();
            }
            (m as f64 / tp as f64).min(m as f64 / tr as f64)
        };
        let g2 = load("google_bleu", params([("max_order", 2i64)]));
        let c = validate_collection(vec!["the cat".into()], vec!["the cat sat".into()]).unwrap();
        let got2 = g2.compute(&c, &ReducePolicy::default()).unwrap().score;
        out.push(approx("google_bleu: \"the cat\" vs \"the cat sat\", orders 1-2 = 0.6", got2, count(2), 1e-15));
        out.push(approx("google_bleu: same oracle gives 0.6", count(2), 0.6, 1e-15));
        out.push(approx("google_bleu: orders 1-4 = 3/6", text_pair("google_bleu", "the cat", "the cat sat"), count(4), 1e-15));
    }

    // ROUGE-L
    {
        let (a, b) = (words("a b c d"), words("a c b d"));
        let lcs = lcs_oracle(&a, &b);
        let f = lcs as f64 / 4.0;
        out.push(check("rougeL: LCS(\"a b c d\", \"a c b d\") = 3", lcs == 3, || format!("oracle LCS {lcs}")));
        out.push(approx("rougeL: P = R = F = 0.75", text_pair("rougeL", "a b c d", "a c b d"), f, 1e-15));
    }

    // chrF per-order hand count
    {
        let want = (0.75 + 2.0 / 3.0 + 0.5 + 0.0) / 4.0;
        let oracle = chrf_oracle("abcd", "abce", 6, 2.0);
        out.push(approx("chrf: \"abcd\" vs \"abce\" char n-gram oracle", text_pair("chrf", "abcd", "abce"), oracle, 1e-15));
        out.push(approx("chrf: hand-counted orders 1-4", oracle, want, 1e-15));
    }

    // TER
    {
        let one_sub = text_pair("ter", "a b x d", "a b c d");
        let lev = levenshtein_oracle(&words("a b x d"), &words("a b c d")) as f64 / 4.0;
        out.push(approx("ter: one substitution over 4 tokens = 0.25", one_sub, lev, 0.0));
        out.push(approx("ter: Levenshtein oracle = 0.25", lev, 0.25, 0.0));
        let swap = text_pair("ter", "b a c d", "a b c d");
        let oracle = single_shift_ter_oracle(&words("b a c d"), &words("a b c d"));
        out.push(approx("ter: \"b a c d\" vs \"a b c d\" one shift = 0.25", swap, oracle, 0.0));
        out.push(approx("ter: single-shift oracle = 0.25", oracle, 0.25, 0.0));
        for (h, r) in [("c d a b", "a b c d"), ("x a b c", "a b c"), ("a c b d e", "a b c d e")] {
            let got = ter_score(&words(h), &words(r)).unwrap();
            let o = single_shift_ter_oracle(&words(h), &words(r));
            out.push(approx(&format!("ter: \"{h}\" vs \"{r}\" vs single-shift oracle"), got, o, 0.0));
        }
    }

    // METEOR
    {
        let p = MeteorParams::default();
        let s = words("the cat sat on the mat");
        let identity = meteor_lite_score(&s, &s, p);
        let m = s.len() as f64;
        out.push(approx("meteor: identity = 1 - 0.5 (1/6)^3", identity, 1.0 - 0.5 * (1.0 / m).powf(3.0), 1e-15));
        let perm = words("on the mat the cat sat");
        let a = meteor_alignment(&perm, &s);
        let chunks = chunk_oracle(&a);
        out.push(check("meteor: chunk count matches enumeration", count_chunks(&a) == chunks && chunks == 2, || {
            format!("library {} oracle {chunks}", count_chunks(&a))
        }));
        let permuted = meteor_lite_score(&perm, &s, p);
        let closed = {
            let matches = a.len() as f64;
            let (prec, rec) = (matches / perm.len() as f64, matches / m);
            let f = prec * rec / (0.9 * prec + 0.1 * rec);
            f * (1.0 - 0.5 * (chunks as f64 / matches).powf(3.0))
        };
        out.push(approx("meteor: permutation score from enumerated chunks", permuted, closed, 1e-15));
        out.push(check("meteor: permutation scores below identity", permuted < identity, || {
            format!("{permuted} >= {identity}")
        }));
    }

    // classification accuracy
    {
        let labels = |v: &[i64]| v.iter().map(|&l| RawEntry::Label(l)).collect::<Vec<_>>();
        let got = run_metric("accuracy-for-sequence-classification", labels(&[1, 0, 1]), labels(&[1, 1, 1])).unwrap().score;
        let oracle = [1, 0, 1].iter().zip([1, 1, 1]).filter(|(a, b)| **a == *b).count() as f64 / 3.0;
        out.push(approx("accuracy: [1,0,1] vs [1,1,1] = 2/3", got, oracle, 1e-15));
    }

    // 3-class confusion matrix, computed by hand:
    //            pred 0  pred 1  pred 2
    //   gold 0      2       1       0
    //   gold 1      0       2       1
    //   gold 2      1       0       1
    {
        let pairs = [(0, 0), (0, 0), (1, 0), (1, 1), (1, 1), (2, 1), (0, 2), (2, 2)];
        let mut c = Confusion::default();
        for (p, g) in pairs {
            c.record(p, g);
        }
        let (macro_prf, comps) = precision_recall_f1(&c, Averaging::Macro);
        // class: (P, R)
        let table = [(2.0 / 3.0, 2.0 / 3.0), (2.0 / 3.0, 2.0 / 3.0), (1.0 / 2.0, 1.0 / 2.0)];
        let f1s: Vec<f64> = table.iter().map(|(p, r)| 2.0 * p * r / (p + r)).collect();
        let mut ok = true;
        for (k, (p, r)) in table.iter().enumerate() {
            ok &= close(comps[&format!("{k}.precision")], *p, 1e-15);
            ok &= close(comps[&format!("{k}.recall")], *r, 1e-15);
            ok &= close(comps[&format!("{k}.f1")], f1s[k], 1e-15);
        }
        ok &= comps["0.support"] == 3.0 && comps["1.support"] == 3.0 && comps["2.support"] == 2.0;
        out.push(check("classification: 3-class per-class table", ok, || format!("{comps:?}")));
        out.push(approx("classification: macro F1", macro_prf.f1, f1s.iter().sum::<f64>() / 3.0, 1e-15));
        let (micro, _) = precision_recall_f1(&c, Averaging::Micro);
        out.push(approx("classification: micro F1 = accuracy 5/8", micro.f1, 5.0 / 8.0, 1e-15));
        let (weighted, _) = precision_recall_f1(&c, Averaging::Weighted);
        out.push(approx(
            "classification: weighted F1",
            weighted.f1,
            (3.0 * f1s[0] + 3.0 * f1s[1] + 2.0 * f1s[2]) / 8.0,
            1e-15,
        ));
    }

    // span extraction
    {
        let tags = |s: &str| s.split(' ').map(str::to_owned).collect::<Vec<_>>();
        let (p, r) = ("B-PER I-PER O", "B-PER O O");
        let s = span_stats(&tags(p), &tags(r)).unwrap();
        let sp = spans_oracle(&p.split(' ').collect::<Vec<_>>());
        let sr = spans_oracle(&r.split(' ').collect::<Vec<_>>());
        let tp = sp.iter().filter(|e| sr.contains(e)).count();
        out.push(check("seqeval: [B-PER I-PER O] vs [B-PER O O] has no true positive", tp == 0 && s.micro_f1() == 0.0, || {
            format!("oracle tp {tp}, library f1 {}", s.micro_f1())
        }));

        let (p, r) = ("B-PER I-PER O B-LOC O", "B-PER I-PER O O B-LOC");
        let res = span_f1_result(&span_stats(&tags(p), &tags(r)).unwrap());
        let sp = spans_oracle(&p.split(' ').collect::<Vec<_>>());
        let sr = spans_oracle(&r.split(' ').collect::<Vec<_>>());
        let tp = sp.iter().filter(|e| sr.contains(e)).count() as f64;
        let (prec, rec) = (tp / sp.len() as f64, tp / sr.len() as f64);
        out.push(check(
            "seqeval: two entities, one matched gives P = R = F1 = 0.5",
            close(res.score, 0.5, 1e-15)
                && close(res.components["precision"], prec, 1e-15)
                && close(res.components["recall"], rec, 1e-15),
            || format!("{res:?}"),
        ));

        let t = "I-LOC I-LOC O B-PER I-ORG B-X";
        let lib: Vec<(String, usize, usize)> = extract_entities(&tags(t))
            .unwrap()
            .entities
            .into_iter()
            .map(|e| (e.kind, e.start, e.end))
            .collect();
        out.push(check("seqeval: entity extraction with repairs", lib == spans_oracle(&t.split(' ').collect::<Vec<_>>()), || {
            format!("{lib:?}")
        }));
    }

    out
}

/// Identity and zero cases for every generation metric and tokenizer mode,
/// plus the classification and labeling ones.
pub fn trivial_checks() -> Vec<Check> {
    let mut out = Vec::new();
    let registry = Registry::with_builtins();
    let policy = ReducePolicy::default();
    let texts = ["the cat sat on the mat", "hi! how are you?", "a", "naïve café, déjà-vu"];

    for mode in ALL_TOKENIZERS {
        for name in ["bleu", "google_bleu", "meteor", "rouge1", "rouge2", "rougeL", "ter", "accuracy"] {
            let m = registry.load_metric(name, &params([("tokenizer", mode.to_string().as_str())])).unwrap();
            for t in texts {
                let c = validate_collection(vec![t.into()], vec![vec!["something else", t].into()]).unwrap();
                let got = m.compute(&c, &policy).unwrap().score;
                let want = match name {
                    "ter" => 0.0,
                    "meteor" => {
                        let n = Tokenizer { mode, normalize: true, lowercase: true }.tokenize(t).len() as f64;
                        1.0 - 0.5 * (1.0 / n).powf(3.0)
                    }
                    _ => 1.0,
                };
                out.push(approx(&format!("{name} [{mode}]: identity on {t:?}"), got, want, 1e-12));
            }
            let c = validate_collection(vec!["aa bb".into()], vec!["cc dd".into()]).unwrap();
            let got = m.compute(&c, &policy).unwrap().score;
            let want = if name == "ter" { 1.0 } else { 0.0 };
            out.push(approx(&format!("{name} [{mode}]: disjoint vocabulary"), got, want, 0.0));
        }
    }
    for name in ["sacrebleu", "chrf"] {
        for t in texts {
            out.push(approx(&format!("{name}: identity on {t:?}"), text_pair(name, t, t), 1.0, 1e-12));
        }
    }
    out.push(approx("chrf: disjoint characters", text_pair("chrf", "abc", "xyz"), 0.0, 0.0));
    out.push(approx("sacrebleu: empty prediction", text_pair("sacrebleu", "", "the cat"), 0.0, 0.0));
    out.push(check(
        "bleu: empty corpus is degenerate",
        matches!(run_metric("bleu", vec!["".into()], vec!["x".into()]), Err(e) if matches!(e.root(), quorum::Error::DegenerateCorpus(_))),
        || "no DegenerateCorpus".into(),
    ));
    out.push(approx(
        "bleu: zero 4-gram precision without smoothing",
        text_pair("bleu", "a b c d", "a b x c d"),
        0.0,
        0.0,
    ));
    out.push(check(
        "ter: empty reference is degenerate",
        matches!(run_metric("ter", vec!["a".into()], vec!["".into()]), Err(e) if matches!(e.root(), quorum::Error::DegenerateInput(_))),
        || "no DegenerateInput".into(),
    ));

    let labels = |v: &[i64]| v.iter().map(|&l| RawEntry::Label(l)).collect::<Vec<_>>();
    for name in ["accuracy-for-sequence-classification", "precision", "recall", "f1"] {
        let same = run_metric(name, labels(&[0, 1, 2, 1]), labels(&[0, 1, 2, 1])).unwrap().score;
        out.push(approx(&format!("{name}: perfect predictions"), same, 1.0, 0.0));
    }
    out.push(approx(
        "accuracy: all different",
        run_metric("accuracy-for-sequence-classification", labels(&[1, 2]), labels(&[0, 0])).unwrap().score,
        0.0,
        0.0,
    ));
    out.push(approx("f1: single class, all wrong", run_metric("f1", labels(&[1, 1]), labels(&[0, 0])).unwrap().score, 0.0, 0.0));

    let tags = |s: &str| RawEntry::Tags(s.split(' ').map(str::to_owned).collect());
    let t = "B-PER I-PER O B-LOC";
    out.push(approx("seqeval: identical sequences", run_metric("seqeval", vec![tags(t)], vec![tags(t)]).unwrap().score, 1.0, 0.0));
    out.push(check(
        "seqeval: tag count mismatch",
        matches!(run_metric("seqeval", vec![tags("O O")], vec![tags("O")]), Err(e) if matches!(e.root(), quorum::Error::LengthMismatch { .. })),
        || "no LengthMismatch".into(),
    ));
    out
}
