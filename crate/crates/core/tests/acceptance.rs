//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! ```bash
//! cargo test --release -p netalign --test acceptance
//! ```

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use netalign::bench::{run_bench, synthetic_problem, BenchReport};
use netalign::encoder::{gradient_check, theorem_bound_check};
use netalign::similarity::{acn_counts, AcnCounts};
use netalign::{katz_centrality, khop_centrality, pipeline, CentralityConfig, EvalReport, RunConfig, TrainConfig};
use rand::Rng;

const SELF_ALIGNMENT_CONF: &str = include_str!("../examples/configs/self_alignment.conf");
const SYNTHETIC_CONF: &str = include_str!("../examples/configs/synthetic.conf");

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn katz_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = common::rng(101);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.gen_range(2..=50);
        let g = common::random_graph(&mut rng, n, 0.1);
        let cfg = CentralityConfig::katz().resolved_for(&[&g]);
        let alpha = cfg.alpha.unwrap();
        let got = katz_centrality(&g, alpha, 1.0, 1e-10, 1000).map_err(|e| e.to_string())?;
        let want = common::katz_dense(&g, alpha, 1.0);
        for (a, b) in got.values().iter().zip(&want) {
            worst = worst.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-8 && elapsed < Duration::from_secs(5),
        format!("max abs error {worst:.2e}, {elapsed:.2?}"),
    )
}

fn khop_oracle() -> Outcome {
    let mut rng = common::rng(202);
    let mut mismatches = 0;
    for _ in 0..100 {
        let n = rng.gen_range(1..=100);
        let p = rng.gen_range(0.005..0.1);
        let g = common::random_graph(&mut rng, n, p);
        for k in 1..=3 {
            let got = khop_centrality(&g, k, 2.0).map_err(|e| e.to_string())?;
            if got.values() != common::khop_bruteforce(&g, k, 2.0).as_slice() {
                mismatches += 1;
            }
        }
        let deg: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
        if khop_centrality(&g, 1, 3.0).map_err(|e| e.to_string())?.values() != deg.as_slice() {
            mismatches += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatching (graph, k) cases out of 400"))
}

fn acn_oracle() -> Outcome {
    let mut rng = common::rng(303);
    let mut mismatches = 0;
    for _ in 0..50 {
        let (n_s, n_t) = (rng.gen_range(1..=30), rng.gen_range(1..=30));
        let (p_s, p_t) = (rng.gen_range(0.05..0.4), rng.gen_range(0.05..0.4));
        let g_s = common::random_graph(&mut rng, n_s, p_s);
        let g_t = common::random_graph(&mut rng, n_t, p_t);
        let size = rng.gen_range(0..=n_s.min(n_t));
        let mapping = common::random_partial_mapping(&mut rng, n_s, n_t, size);
        let want = common::acn_bruteforce(&g_s, &g_t, &mapping);
        let mut incremental = AcnCounts::zeros(n_s, n_t);
        for p in mapping.pairs() {
            incremental.add_pair(&g_s, &g_t, p.source, p.target);
        }
        let full = acn_counts(&g_s, &g_t, &mapping);
        let same = |c: &AcnCounts| (0..n_s).all(|u| (0..n_t).all(|v| c.get(u, v) == want[u][v]));
        if !same(&incremental) || !same(&full) {
            mismatches += 1;
        }
    }
    check(mismatches == 0, format!("{mismatches} mismatching instances out of 50"))
}

fn gradients() -> Outcome {
    let cfg = TrainConfig {
        hidden_dim: 6,
        ..Default::default()
    };
    let worst = (0..20).map(|s| gradient_check(&cfg, s)).fold(0.0f64, f64::max);
    check(worst <= 1e-4, format!("max relative error {worst:.2e} over 20 trials"))
}

fn embedding_bound() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for (i, eps) in [0.0, 0.01, 0.1, 1.0].into_iter().enumerate() {
        let r = theorem_bound_check(eps, 200, 500 + i as u64);
        ok &= r.passed() && r.passed_trials == 200;
        parts.push(format!("eps={eps}: {}/{}", r.passed_trials, r.trials));
    }
    check(ok, parts.join(", "))
}

struct Runs {
    self_alignment: Option<BenchReport>,
    augmented: Option<BenchReport>,
    all_ones: Option<BenchReport>,
    supervised: Option<BenchReport>,
}

fn config(text: &str) -> RunConfig {
    text.parse().expect("bundled config parses")
}

fn self_alignment(runs: &mut Runs) -> Outcome {
    let start = Instant::now();
    let report = run_bench(&config(SELF_ALIGNMENT_CONF)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let acc = report.mean.accuracy;
    let per_seed: Vec<String> = report.rows.iter().map(|r| format!("{:.3}", r.report.accuracy)).collect();
    runs.self_alignment = Some(report);
    check(
        acc >= 0.95 && elapsed < Duration::from_secs(120),
        format!("mean Acc {acc:.4} (seeds {}), {elapsed:.2?}", per_seed.join(" ")),
    )
}

fn augmentation_ablation(runs: &mut Runs) -> Outcome {
    let cfg = config(SYNTHETIC_CONF);
    let mut ones = cfg.clone();
    ones.augmentation_enabled = false;
    let with = run_bench(&cfg).map_err(|e| e.to_string())?;
    let without = run_bench(&ones).map_err(|e| e.to_string())?;
    let (a, b) = (with.mean.accuracy, without.mean.accuracy);
    runs.augmented = Some(with);
    runs.all_ones = Some(without);
    check(a > b, format!("mean Acc augmented {a:.4} vs all-ones {b:.4}"))
}

fn supervision_trend(runs: &mut Runs) -> Outcome {
    let mut cfg = config(SYNTHETIC_CONF);
    cfg.anchor_fraction = 0.4;
    let supervised = run_bench(&cfg).map_err(|e| e.to_string())?;
    let unsupervised = match &runs.augmented {
        Some(r) => r.mean.accuracy,
        None => run_bench(&config(SYNTHETIC_CONF)).map_err(|e| e.to_string())?.mean.accuracy,
    };
    let a = supervised.mean.accuracy;
    runs.supervised = Some(supervised);
    check(a >= unsupervised, format!("mean Acc t=0.4 {a:.4} vs t=0 {unsupervised:.4}"))
}

fn monotone_precision(r: &EvalReport) -> bool {
    r.precision_at.windows(2).all(|w| w[0].1 <= w[1].1)
}

fn metric_coherence(runs: &Runs) -> Outcome {
    let mut reports = 0;
    let mut broken = 0;
    for bench in [&runs.self_alignment, &runs.augmented, &runs.all_ones, &runs.supervised]
        .into_iter()
        .flatten()
    {
        for r in bench.rows.iter().map(|r| &r.report).chain([&bench.mean]) {
            reports += 1;
            if !monotone_precision(r) {
                broken += 1;
            }
        }
    }

    // Acc vs Precision@10 where the matcher's choice is the row argmax.
    let (mut agreeing, mut violations) = (0, 0);
    for (text, seeds) in [(SELF_ALIGNMENT_CONF, 1..=3u64), (SYNTHETIC_CONF, 1..=5)] {
        let cfg = config(text);
        for seed in seeds {
            let problem = synthetic_problem(&cfg, seed).map_err(|e| e.to_string())?;
            let result = pipeline::run(&problem, &cfg).map_err(|e| e.to_string())?;
            let s = &result.outcome.final_similarity;
            let agrees = problem.ground_truth().iter().all(|&(u, _)| {
                let row = s.values.row(u);
                let best = (0..row.len()).fold(0, |b, v| if row[v] > row[b] { v } else { b });
                result.outcome.mapping.target_of(u) == Some(best)
            });
            let report = result.report.expect("ground truth present");
            if agrees {
                agreeing += 1;
                if report.accuracy > report.precision(10).unwrap() {
                    violations += 1;
                }
            }
            if !monotone_precision(&report) {
                broken += 1;
            }
        }
    }
    check(
        broken == 0 && violations == 0,
        format!(
            "{broken} non-monotone Precision@q reports out of {}; Acc > P@10 in {violations} of {agreeing} argmax-agreeing runs",
            reports + 8
        ),
    )
}

fn determinism() -> Outcome {
    let cfg = config(SYNTHETIC_CONF);
    let a = run_bench(&cfg).map_err(|e| e.to_string())?.to_json();
    let b = run_bench(&cfg).map_err(|e| e.to_string())?.to_json();
    check(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let mut runs = Runs {
        self_alignment: None,
        augmented: None,
        all_ones: None,
        supervised: None,
    };
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 katz oracle", katz_oracle()),
        ("2 k-hop oracle", khop_oracle()),
        ("3 acn oracle", acn_oracle()),
        ("4 gradient check", gradients()),
        ("5 embedding bound", embedding_bound()),
    ];
    results.push(("6 self-alignment", self_alignment(&mut runs)));
    results.push(("7 augmentation ablation", augmentation_ablation(&mut runs)));
    results.push(("8 supervision trend", supervision_trend(&mut runs)));
    results.push(("9 metric coherence", metric_coherence(&runs)));
    results.push(("10 determinism", determinism()));

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
