//! Synthetic benchmark protocol: a seeded random graph is aligned against a
//! noisy, id-shuffled copy of itself, once per seed.

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::config::{GraphModel, RunConfig};
use crate::error::Result;
use crate::graph::AlignmentProblem;
use crate::metrics::EvalReport;
use crate::pipeline;
use crate::synth::{barabasi_albert, derive_seed, erdos_renyi, perturb, random_binary_attributes, sample_anchors, shuffle_nodes, PerturbConfig};

const GRAPH_STREAM: u64 = 11;
const ATTR_STREAM: u64 = 12;
const NOISE_STREAM: u64 = 13;
const SHUFFLE_STREAM: u64 = 14;
const ANCHOR_STREAM: u64 = 15;
const TRAIN_STREAM: u64 = 16;

/// Builds the seeded problem: base graph, noisy copy with shuffled ids, and
/// anchors sampled from the ground truth.
pub fn synthetic_problem(cfg: &RunConfig, seed: u64) -> Result<AlignmentProblem> {
    let b = &cfg.bench;
    let graph_seed = derive_seed(seed, GRAPH_STREAM);
    let mut base = match b.model {
        GraphModel::Er => erdos_renyi(b.nodes, b.edge_prob, graph_seed)?,
        GraphModel::Ba => barabasi_albert(b.nodes, b.attach, graph_seed)?,
    };
    if b.attr_dim > 0 {
        let x = random_binary_attributes(b.nodes, b.attr_dim, 0.5, derive_seed(seed, ATTR_STREAM));
        base = base.with_attributes(Some(x))?;
    }
    let noise = PerturbConfig {
        rng_seed: derive_seed(seed, NOISE_STREAM),
        ..cfg.perturb.clone()
    };
    let (noisy, _) = perturb(&base, &noise)?;
    let (target, perm) = shuffle_nodes(&noisy, derive_seed(seed, SHUFFLE_STREAM))?;
    let truth: Vec<_> = perm.iter().enumerate().map(|(i, &p)| (i, p)).collect();
    let seeds = sample_anchors(&truth, cfg.anchor_fraction, derive_seed(seed, ANCHOR_STREAM))?;
    AlignmentProblem::new(base, target, truth, seeds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub report: EvalReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub mean: EvalReport,
}

fn mean_report(rows: &[BenchRow]) -> EvalReport {
    let k = rows.len().max(1) as f64;
    let first = rows.first().map(|r| r.report.precision_at.clone()).unwrap_or_default();
    EvalReport {
        accuracy: rows.iter().map(|r| r.report.accuracy).sum::<f64>() / k,
        precision_at: first
            .iter()
            .enumerate()
            .map(|(i, &(q, _))| (q, rows.iter().map(|r| r.report.precision_at[i].1).sum::<f64>() / k))
            .collect(),
        matched_count: rows.iter().map(|r| r.report.matched_count).sum::<usize>() / rows.len().max(1),
    }
}

/// Runs one seed of the protocol.
pub fn run_seed(cfg: &RunConfig, seed: u64) -> Result<BenchRow> {
    let problem = synthetic_problem(cfg, seed)?;
    let mut run_cfg = cfg.clone();
    run_cfg.train.rng_seed = derive_seed(cfg.train.rng_seed ^ seed, TRAIN_STREAM);
    let result = pipeline::run(&problem, &run_cfg)?;
    let report = result
        .report
        .expect("synthetic problems hold non-seed ground truth");
    Ok(BenchRow { seed, report })
}

/// Runs `bench.seeds` consecutive seeds; rows are ordered by seed.
pub fn run_bench(cfg: &RunConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let seeds: Vec<u64> = (0..cfg.bench.seeds as u64).map(|i| cfg.bench.first_seed + i).collect();
    let rows = seeds
        .par_iter()
        .map(|&s| run_seed(cfg, s))
        .collect::<Result<Vec<_>>>()?;
    let mean = mean_report(&rows);
    Ok(BenchReport { rows, mean })
}

struct RowJson<'a>(Option<u64>, &'a EvalReport);

#[derive(serde::Serialize)]
struct BenchJson<'a> {
    rows: Vec<RowJson<'a>>,
    mean: RowJson<'a>,
}

impl Serialize for RowJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        match self.0 {
            Some(seed) => map.serialize_entry("seed", &seed)?,
            None => map.serialize_entry("seed", "mean")?,
        }
        map.serialize_entry("accuracy", &self.1.accuracy)?;
        for (q, p) in &self.1.precision_at {
            map.serialize_entry(&format!("precision@{q}"), p)?;
        }
        map.serialize_entry("matched_count", &self.1.matched_count)?;
        map.end()
    }
}

impl BenchReport {
    /// `{"rows": [...], "mean": {...}}`, newline-terminated.
    pub fn to_json(&self) -> String {
        let rows: Vec<_> = self.rows.iter().map(|r| RowJson(Some(r.seed), &r.report)).collect();
        let doc = BenchJson {
            rows,
            mean: RowJson(None, &self.mean),
        };
        serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
    }

    /// Tab-separated table: one line per seed and a final `mean` line.
    pub fn to_table(&self) -> String {
        let mut header = vec!["seed".to_string(), "accuracy".to_string()];
        header.extend(self.mean.precision_at.iter().map(|(q, _)| format!("precision@{q}")));
        header.push("matched_count".into());
        let mut out = header.join("\t") + "\n";
        let line = |label: String, r: &EvalReport| {
            let mut cells = vec![label, format!("{:.4}", r.accuracy)];
            cells.extend(r.precision_at.iter().map(|(_, p)| format!("{p:.4}")));
            cells.push(r.matched_count.to_string());
            cells.join("\t") + "\n"
        };
        for row in &self.rows {
            out += &line(row.seed.to_string(), &row.report);
        }
        out += &line("mean".into(), &self.mean);
        out
    }
}
