//! Acceptance suite. One test per criterion; each prints a pass line so the
//! whole gate is auditable with `cargo test --test acceptance -- --nocapture`.

use dlens_core::ccd::{cognitive_complexity_d, detect_patterns, PatternId, RuleId};
use dlens_core::classify::{
    classify_absolute, classify_ratio, default_absolute_grid, evaluate, tune_threshold,
    ConfusionMatrix, EvalReport, Label, ThresholdMode,
};
use dlens_core::cognitive::cognitive_complexity;
use dlens_core::ngram::{NgramModel, Smoothing};
use dlens_core::SyntaxUnit;
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/testdata/golden")
        .join(format!("{name}.java"))
}

fn golden(name: &str) -> SyntaxUnit {
    let path = golden_path(name);
    let source = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    SyntaxUnit::parse(path.display().to_string(), &source).expect("golden file parses")
}

fn cc(name: &str) -> u64 {
    cognitive_complexity(&golden(name)).file_total
}

fn ccd_total(name: &str) -> u64 {
    cognitive_complexity_d(&golden(name)).file_total
}

// ---------------------------------------------------------------------------
// Criterion 1: worked-example fidelity.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_worked_example_fidelity() {
    let started = Instant::now();
    assert_eq!(cc("listing1"), 5, "single-method worked example");
    assert_eq!(cc("fig4a"), 5, "original command excerpt");
    assert_eq!(cc("fig4b"), 8, "restructured command excerpt");
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("acceptance criterion 1 (worked-example fidelity): pass ({elapsed:?})");
}

// ---------------------------------------------------------------------------
// Criterion 2: evaluation-math regression against published matrices.
// ---------------------------------------------------------------------------

struct Expected {
    name: &'static str,
    matrix: [[u64; 3]; 3],
    /// (precision, recall, f1) per class, Less/Equi/More, two-decimal targets.
    per_class: [[f64; 3]; 3],
    macro_f1: Option<f64>,
}

fn check_regression(case: &Expected) {
    let report = EvalReport::from_matrix(ConfusionMatrix(case.matrix));
    for (metrics, want) in report.per_class.iter().zip(case.per_class) {
        let got = [metrics.precision, metrics.recall, metrics.f1];
        for ((g, w), what) in got.iter().zip(want).zip(["precision", "recall", "f1"]) {
            assert!(
                (g - w).abs() <= 0.005,
                "{}: {} {what}: computed {g:.4}, published {w}",
                case.name,
                metrics.label
            );
        }
    }
    if let Some(want) = case.macro_f1 {
        assert!(
            (report.macro_f1 - want).abs() <= 0.005,
            "{}: macro F1 computed {:.4}, published {want}",
            case.name,
            report.macro_f1
        );
    }
}

#[test]
fn criterion_2_evaluation_math_regression() {
    let started = Instant::now();
    let cases = [
        Expected {
            name: "base metric, full dataset",
            matrix: [[79, 19, 4], [181, 901, 72], [10, 14, 7]],
            per_class: [
                [0.77, 0.29, 0.42],
                [0.78, 0.96, 0.86],
                [0.23, 0.08, 0.12],
            ],
            macro_f1: Some(0.47),
        },
        Expected {
            name: "perplexity, full dataset",
            matrix: [[68, 121, 2], [184, 753, 70], [18, 60, 11]],
            per_class: [
                [0.36, 0.25, 0.30],
                [0.75, 0.81, 0.78],
                [0.12, 0.13, 0.13],
            ],
            macro_f1: Some(0.40),
        },
        Expected {
            name: "extended metric, full dataset",
            matrix: [[231, 46, 0], [39, 868, 7], [0, 20, 76]],
            per_class: [
                [0.83, 0.86, 0.84],
                [0.95, 0.93, 0.94],
                [0.79, 0.92, 0.85],
            ],
            macro_f1: Some(0.88),
        },
        Expected {
            name: "base metric, test set",
            matrix: [[20, 3, 4], [26, 181, 8], [9, 8, 11]],
            per_class: [
                [0.74, 0.36, 0.49],
                [0.84, 0.94, 0.89],
                [0.39, 0.48, 0.43],
            ],
            macro_f1: None,
        },
        Expected {
            name: "perplexity, test set",
            // The matrix puts 1 of 21 predicted-More right, so its More
            // precision is 0.05 at two decimals.
            matrix: [[26, 82, 6], [21, 98, 16], [8, 12, 1]],
            per_class: [
                [0.23, 0.47, 0.31],
                [0.73, 0.51, 0.60],
                [0.05, 0.04, 0.05],
            ],
            macro_f1: None,
        },
        Expected {
            name: "extended metric, test set",
            matrix: [[44, 8, 0], [11, 177, 2], [0, 7, 21]],
            per_class: [
                [0.85, 0.80, 0.82],
                [0.93, 0.92, 0.93],
                [0.75, 0.91, 0.82],
            ],
            macro_f1: Some(0.86),
        },
    ];
    for case in &cases {
        check_regression(case);
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 2 (evaluation-math regression, {} matrices): pass ({elapsed:?})",
        cases.len()
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: classifier formula properties, >= 1000 randomized cases each.
// ---------------------------------------------------------------------------

const PROP_CASES: u32 = 1000;

fn runner() -> TestRunner {
    TestRunner::new(PropConfig {
        cases: PROP_CASES,
        ..PropConfig::default()
    })
}

fn rank(label: Label) -> u8 {
    match label {
        Label::More => 0,
        Label::Equi => 1,
        Label::Less => 2,
    }
}

#[test]
fn criterion_3_classifier_formula_suite() {
    // Translation invariance on integer-valued scores, where f64 addition
    // is exact and the property holds without rounding caveats.
    runner()
        .run(
            &(
                -1_000_000i32..1_000_000,
                -1_000_000i32..1_000_000,
                0i32..1_000,
                -1_000_000i32..1_000_000,
            ),
            |(x, ori, t, c)| {
                let (x, ori, t, c) = (x as f64, ori as f64, t as f64, c as f64);
                prop_assert_eq!(
                    classify_absolute(x + c, ori + c, t),
                    classify_absolute(x, ori, t)
                );
                Ok(())
            },
        )
        .unwrap();

    // Scale invariance under dyadic factors, which rescale exactly.
    runner()
        .run(
            &(
                0.001f64..1000.0,
                0.001f64..1000.0,
                0.0f64..0.99,
                -30i32..31,
            ),
            |(x, ori, t, e)| {
                let k = (2.0f64).powi(e);
                prop_assert_eq!(
                    classify_ratio(k * x, k * ori, t).unwrap(),
                    classify_ratio(x, ori, t).unwrap()
                );
                Ok(())
            },
        )
        .unwrap();

    // Boundary inclusion: both band edges classify as Equi.
    runner()
        .run(
            &(-1_000_000.0f64..1_000_000.0, 0.0f64..1_000.0),
            |(ori, t)| {
                prop_assert_eq!(classify_absolute(ori + t, ori, t), Label::Equi);
                prop_assert_eq!(classify_absolute(ori - t, ori, t), Label::Equi);
                Ok(())
            },
        )
        .unwrap();
    runner()
        .run(&(0.001f64..100_000.0, 0.0f64..0.99), |(ori, t)| {
            prop_assert_eq!(
                classify_ratio((1.0 + t) * ori, ori, t).unwrap(),
                Label::Equi
            );
            prop_assert_eq!(
                classify_ratio((1.0 - t) * ori, ori, t).unwrap(),
                Label::Equi
            );
            Ok(())
        })
        .unwrap();

    // Label monotonicity: raising the decompiled score only moves the label
    // toward Less.
    runner()
        .run(
            &(
                -1_000_000.0f64..1_000_000.0,
                -1_000_000.0f64..1_000_000.0,
                -1_000_000.0f64..1_000_000.0,
                0.0f64..1_000.0,
            ),
            |(x1, x2, ori, t)| {
                let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
                prop_assert!(
                    rank(classify_absolute(lo, ori, t)) <= rank(classify_absolute(hi, ori, t))
                );
                Ok(())
            },
        )
        .unwrap();

    println!(
        "acceptance criterion 3 (classifier formula suite, {PROP_CASES} cases per property): pass"
    );
}

// ---------------------------------------------------------------------------
// Criterion 4: threshold tuner recovers planted thresholds.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_threshold_tuner_oracle() {
    for planted in 0..=10 {
        let t_star = planted as f64;
        let mut pairs = Vec::new();
        let mut truths = Vec::new();
        // Boundary pairs make every other grid point misclassify something:
        // offsets of exactly t* must stay Equi, t* + 1 must read as Less,
        // and the mirrored offsets cover the More side.
        for ori in [40.0, 100.0, 250.0] {
            for (offset, label) in [
                (0.0, Label::Equi),
                (t_star, Label::Equi),
                (-t_star, Label::Equi),
                (t_star + 1.0, Label::Less),
                (-t_star - 1.0, Label::More),
            ] {
                pairs.push((ori + offset, ori));
                truths.push(label);
            }
        }
        let result = tune_threshold(
            &pairs,
            &truths,
            ThresholdMode::Absolute,
            &default_absolute_grid(),
        )
        .expect("tuning succeeds");
        assert_eq!(result.best_t, t_star, "planted t* = {t_star}");
        assert_eq!(
            result.best_macro_f1, 1.0,
            "planted t* = {t_star} must reach macro F1 1.0"
        );
        // Every other grid point stays strictly below 1.0.
        for (t, f1) in &result.grid {
            if *t != t_star {
                assert!(*f1 < 1.0, "t = {t} unexpectedly perfect");
            }
        }
    }
    println!("acceptance criterion 4 (threshold-tuner oracle, 11 plants): pass");
}

// ---------------------------------------------------------------------------
// Criterion 5: perplexity oracle equivalence.
// ---------------------------------------------------------------------------

/// Independent reimplementation of the documented smoothing formula over
/// string-keyed count maps.
struct BruteForceLm {
    order: usize,
    k: f64,
    beta: f64,
    vocab: BTreeSet<String>,
    counts: HashMap<Vec<String>, HashMap<String, u64>>,
}

const ORACLE_UNK: &str = "<unk>";
const ORACLE_BOS: &str = "<s>";

impl BruteForceLm {
    fn train(corpus: &[Vec<&str>], order: usize, s: &Smoothing) -> Self {
        let mut raw: HashMap<&str, u64> = HashMap::new();
        for stream in corpus {
            for tok in stream {
                *raw.entry(tok).or_insert(0) += 1;
            }
        }
        let vocab: BTreeSet<String> = raw
            .iter()
            .filter(|(_, c)| **c >= s.min_count as u64)
            .map(|(t, _)| t.to_string())
            .collect();
        let mut counts: HashMap<Vec<String>, HashMap<String, u64>> = HashMap::new();
        for stream in corpus {
            let mapped: Vec<String> = stream
                .iter()
                .map(|t| {
                    if vocab.contains(*t) {
                        t.to_string()
                    } else {
                        ORACLE_UNK.to_string()
                    }
                })
                .collect();
            for (i, token) in mapped.iter().enumerate() {
                for m in 1..=order {
                    let needed = m - 1;
                    let mut context = vec![ORACLE_BOS.to_string(); needed.saturating_sub(i)];
                    let tail = needed - context.len();
                    context.extend_from_slice(&mapped[i - tail..i]);
                    *counts
                        .entry(context)
                        .or_default()
                        .entry(token.clone())
                        .or_insert(0) += 1;
                }
            }
        }
        BruteForceLm {
            order,
            k: s.add_k,
            beta: s.backoff,
            vocab,
            counts,
        }
    }

    fn conditional(&self, context: &[String], token: &str) -> f64 {
        let v = (self.vocab.len() + 1) as f64;
        let total = self
            .counts
            .get(context)
            .map(|m| m.values().sum::<u64>() as f64)
            .unwrap_or(0.0);
        let count = self
            .counts
            .get(context)
            .and_then(|m| m.get(token).copied())
            .unwrap_or(0) as f64;
        if context.is_empty() {
            return (count + self.k) / (total + self.k * v);
        }
        let lower = self.conditional(&context[1..], token);
        if total == 0.0 {
            return lower;
        }
        let lambda = total / (total + self.beta);
        lambda * (count + self.k) / (total + self.k * v) + (1.0 - lambda) * lower
    }

    fn perplexity(&self, tokens: &[&str]) -> f64 {
        let mut context = vec![ORACLE_BOS.to_string(); self.order - 1];
        let mut log_sum = 0.0;
        for tok in tokens {
            let mapped = if self.vocab.contains(*tok) {
                tok.to_string()
            } else {
                ORACLE_UNK.to_string()
            };
            log_sum += self.conditional(&context, &mapped).ln();
            if self.order > 1 {
                context.remove(0);
                context.push(mapped);
            }
        }
        (-log_sum / tokens.len() as f64).exp()
    }
}

#[test]
fn criterion_5_perplexity_oracle_equivalence() {
    let smoothing = Smoothing::default();
    // Every corpus stays hand-countable (at most 20 tokens).
    let corpora: [(&[&[&str]], usize, &[&[&str]]); 3] = [
        (
            &[&["a", "b", "a", "b"]],
            2,
            &[&["a", "b"], &["b", "b", "a"], &["a", "q"]],
        ),
        (
            &[&["x", "y", "x", "z", "x", "y"], &["y", "z", "y", "x"]],
            3,
            &[&["x", "y", "z"], &["unseen", "x"]],
        ),
        (
            &[
                &["if", "(", "a", ")", "{", "}"],
                &["if", "(", "a", ")", "{", "}"],
            ],
            5,
            &[&["if", "(", "a", ")", "{", "}"], &["while", "(", "a", ")"]],
        ),
    ];
    for (corpus, order, queries) in corpora {
        let streams: Vec<Vec<&str>> = corpus.iter().map(|s| s.to_vec()).collect();
        let owned: Vec<Vec<String>> = streams
            .iter()
            .map(|s| s.iter().map(|t| t.to_string()).collect())
            .collect();
        let total: usize = owned.iter().map(Vec::len).sum();
        assert!(total <= 20, "corpus must stay hand-countable");
        let model = NgramModel::train(&owned, order, smoothing.clone()).unwrap();
        let oracle = BruteForceLm::train(&streams, order, &smoothing);
        for query in queries {
            let got = model.perplexity(query).unwrap().value;
            let want = oracle.perplexity(query);
            let rel = (got - want).abs() / want.abs().max(1e-300);
            assert!(
                rel < 1e-9,
                "order {order}, query {query:?}: model {got} vs oracle {want} (rel {rel:e})"
            );
        }
    }

    // All conditionals equal to one gives perplexity exactly one: a single
    // repeated token with the add-k floor disabled.
    let exact = Smoothing {
        add_k: 0.0,
        backoff: 1.0,
        min_count: 2,
    };
    let ones = NgramModel::train(
        &[vec!["t".to_string(), "t".to_string(), "t".to_string(), "t".to_string()]],
        1,
        exact,
    )
    .unwrap();
    let score = ones.perplexity(&["t", "t"]).unwrap();
    assert!((score.value - 1.0).abs() < 1e-12);

    // A uniform unigram model scores any sequence at exactly the vocabulary
    // size: three seen types plus the unknown bucket, all with equal counts.
    let uniform = NgramModel::train(
        &[
            "a a b b c c x y"
                .split_whitespace()
                .map(str::to_string)
                .collect::<Vec<_>>(),
        ],
        1,
        Smoothing::default(),
    )
    .unwrap();
    assert_eq!(uniform.vocab_size(), 4);
    let score = uniform.perplexity(&["a", "b", "c", "never-seen"]).unwrap();
    assert!(
        (score.value - 4.0).abs() < 1e-9,
        "uniform-unigram perplexity {} != vocabulary size 4",
        score.value
    );

    println!("acceptance criterion 5 (perplexity oracle equivalence): pass");
}

// ---------------------------------------------------------------------------
// Criterion 6: rule isolation and figure-pair directionality.
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_rule_isolation_and_directionality() {
    struct Snippet {
        rule: RuleId,
        amount: u64,
        source: String,
    }
    let long_line = format!(
        "class A {{ void f() {{ g(\"{}\"); }} void g(String s) {{}} }}",
        "x".repeat(100)
    );
    let long_line_len = long_line.len() as u64;
    assert!(long_line_len > 120 && long_line_len < 240);
    let snippets = [
        Snippet {
            rule: RuleId::R1,
            amount: 3,
            source: "class A {\n  void f(boolean a, boolean b, boolean c, boolean d) {\n    \
                     if (a) { if (b) { if (c) { if (d) { g(); } } } }\n  }\n  void g() {}\n}\n"
                .to_string(),
        },
        Snippet {
            rule: RuleId::R2,
            amount: 3,
            source: "class A { int f(int a, int b, int c) { return a & b >> c; } }".to_string(),
        },
        Snippet {
            rule: RuleId::R3,
            amount: long_line_len / 120,
            source: long_line,
        },
        Snippet {
            rule: RuleId::R4,
            amount: 4,
            source: "class A { void f(boolean a) { if (a) g(); } void g() {} }".to_string(),
        },
        Snippet {
            rule: RuleId::R5,
            amount: 4,
            source: "class A { boolean f(int b) { int a; return (a = b) > 0; } }".to_string(),
        },
        Snippet {
            rule: RuleId::R6,
            amount: 1,
            source: "class A { int f() { return 42; } }".to_string(),
        },
    ];
    for snippet in &snippets {
        let unit = SyntaxUnit::parse_str(&snippet.source).expect("snippet parses");
        let breakdown = cognitive_complexity_d(&unit);
        assert_eq!(
            breakdown.rule_increments.len(),
            1,
            "{:?} snippet must trigger exactly one rule increment, got {:?}",
            snippet.rule,
            breakdown.rule_increments
        );
        let increment = &breakdown.rule_increments[0];
        assert_eq!(increment.rule, snippet.rule);
        assert_eq!(increment.amount, snippet.amount, "{:?}", snippet.rule);
    }

    // The stated brace example: base 1 plus the brace increment.
    let unbraced =
        SyntaxUnit::parse_str("class A { void f(boolean a) { if (a) return; } }").unwrap();
    let b = cognitive_complexity_d(&unbraced);
    assert_eq!(b.base.file_total, 1);
    assert_eq!(b.file_total, 5);

    // Directionality across the six golden pairs.
    for (original, decompiled) in [
        ("fig5a", "fig5b"),
        ("fig6a", "fig6b"),
        ("fig7a", "fig7b"),
        ("fig8a", "fig8b"),
        ("fig9a", "fig9b"),
        ("fig10a", "fig10b"),
    ] {
        let ori = ccd_total(original);
        let dec = ccd_total(decompiled);
        assert!(
            dec > ori,
            "{decompiled} ({dec}) must exceed {original} ({ori})"
        );
    }
    println!("acceptance criterion 6 (rule isolation + directionality): pass");
}

// ---------------------------------------------------------------------------
// Criterion 7: pattern-detection golden set.
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_pattern_golden_set() {
    let cases = [
        ("fig5b", PatternId::P1),
        ("fig12b", PatternId::P1),
        ("fig6b", PatternId::P2),
        ("fig7b", PatternId::P3),
        ("fig8b", PatternId::P4),
        ("fig9b", PatternId::P5),
        ("fig10b", PatternId::P6),
    ];
    for (name, pattern) in cases {
        let report = detect_patterns(&golden(name));
        assert!(report.is_present(pattern), "{pattern} must fire on {name}");
    }
    for original in ["fig5a", "fig12a", "fig6a", "fig7a", "fig8a", "fig9a", "fig10a"] {
        let report = detect_patterns(&golden(original));
        assert!(
            report.present().is_empty(),
            "{original} must be pattern-free, found {:?}",
            report.present()
        );
    }
    println!("acceptance criterion 7 (pattern detection golden set): pass");
}

// ---------------------------------------------------------------------------
// Criterion 8: byte-identical model files and reports across runs.
// ---------------------------------------------------------------------------

fn dlens() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dlens"))
}

#[test]
fn criterion_8_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    std::fs::create_dir(&corpus).unwrap();
    for name in ["fig4a", "fig5a", "fig7a", "fig8a"] {
        std::fs::copy(golden_path(name), corpus.join(format!("{name}.java"))).unwrap();
    }

    // Model files.
    let model_a = dir.path().join("a.bin");
    let model_b = dir.path().join("b.bin");
    for model in [&model_a, &model_b] {
        let output = dlens()
            .args(["train-lm", "--corpus"])
            .arg(&corpus)
            .arg("--out")
            .arg(model)
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "{output:?}");
    }
    let bytes_a = std::fs::read(&model_a).unwrap();
    let bytes_b = std::fs::read(&model_b).unwrap();
    assert_eq!(bytes_a, bytes_b, "model files must be byte-identical");

    // Reports.
    let manifest = dir.path().join("pairs.csv");
    let row = |id: &str, a: &str, b: &str, label: &str| {
        format!(
            "{id},{},{},{label},Demo,Sample\n",
            golden_path(a).display(),
            golden_path(b).display()
        )
    };
    std::fs::write(
        &manifest,
        format!(
            "pair_id,source_path,decompiled_path,label,project,decompiler\n{}{}{}",
            row("kick", "fig4a", "fig4b", "Equi"),
            row("effect", "fig5a", "fig5b", "Less"),
            row("fifo", "fig7a", "fig7b", "Less"),
        ),
    )
    .unwrap();
    let run_compare = || {
        let output = dlens()
            .args(["compare", "--manifest"])
            .arg(&manifest)
            .args(["--metric", "cc,ccd,ppl", "--model"])
            .arg(&model_a)
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "{output:?}");
        output.stdout
    };
    let first = run_compare();
    let second = run_compare();
    assert!(!first.is_empty());
    assert_eq!(first, second, "compare reports must be byte-identical");

    // The library path is deterministic too.
    let stream: Vec<String> = "a a b b c".split_whitespace().map(str::to_string).collect();
    let m1 = NgramModel::train(&[stream.clone()], 3, Smoothing::default()).unwrap();
    let m2 = NgramModel::train(&[stream], 3, Smoothing::default()).unwrap();
    assert_eq!(m1.to_bytes(), m2.to_bytes());

    println!("acceptance criterion 8 (determinism): pass");
}

// ---------------------------------------------------------------------------
// Spot checks shared by several criteria.
// ---------------------------------------------------------------------------

#[test]
fn classifier_worked_examples() {
    assert_eq!(classify_absolute(8.0, 5.0, 3.0), Label::Equi);
    assert_eq!(classify_absolute(9.0, 5.0, 3.0), Label::Less);
    assert_eq!(classify_absolute(1.0, 5.0, 3.0), Label::More);
    assert_eq!(classify_ratio(127.0, 100.0, 0.27).unwrap(), Label::Equi);
    assert_eq!(classify_ratio(127.5, 100.0, 0.27).unwrap(), Label::Less);
    assert_eq!(classify_ratio(73.0, 100.0, 0.27).unwrap(), Label::Equi);
    let all = [Label::Less, Label::Equi, Label::More, Label::Less];
    assert_eq!(evaluate(&all, &all).unwrap().macro_f1, 1.0);
}
