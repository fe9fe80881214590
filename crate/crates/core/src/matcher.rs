//! Gradual node matching. Each iteration scores unmatched pairs with
//! `S_emb ⊙ (ACN + 1)^p`, commits a batch of the most confident pairs, and
//! updates ACN counts so the next batch benefits from the new anchors.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{AlignError, Result};
use crate::graph::{AlignmentProblem, Mapping};
use crate::similarity::{embedding_similarity, AcnBoost, AcnCounts, ChannelEmbeddings, SimilarityMatrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchConfig {
    pub iterations: usize,
    /// ACN exponent.
    pub p: f64,
    /// Weight of the augmented channel when original attributes exist.
    pub lambda: f64,
    pub rng_seed: u64,
}

impl Default for MatchConfig {
    fn default() -> Self {
        MatchConfig {
            iterations: 10,
            p: 2.0,
            lambda: 1.0,
            rng_seed: 0,
        }
    }
}

impl MatchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(AlignError::Config("iterations must be >= 1".into()));
        }
        if !(self.p > 0.0) {
            return Err(AlignError::Config(format!("p must be positive, got {}", self.p)));
        }
        if !(self.lambda >= 0.0) {
            return Err(AlignError::Config(format!(
                "lambda must be non-negative, got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// Embeddings of both attribute channels. The original channel is absent
/// for networks without node attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineEmbeddings {
    pub original: Option<ChannelEmbeddings>,
    pub augmented: ChannelEmbeddings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub iteration: usize,
    pub committed: usize,
    pub min_similarity: f64,
    pub max_similarity: f64,
}

#[derive(Debug, Clone)]
pub struct AlignmentOutcome {
    pub mapping: Mapping,
    pub trace: Vec<IterationTrace>,
    /// Combined similarity used by the last matching iteration.
    pub final_similarity: SimilarityMatrix,
}

/// Up to `budget` pairs in decreasing similarity, skipping matched nodes and
/// nodes already taken earlier in the batch. Ties go to the smaller source
/// id, then the smaller target id.
pub fn greedy_commit(
    s: &SimilarityMatrix,
    budget: usize,
    matched_s: &[bool],
    matched_t: &[bool],
) -> Vec<(usize, usize)> {
    greedy_scored(&s.values, budget, matched_s, matched_t)
        .into_iter()
        .map(|(u, v, _)| (u, v))
        .collect()
}

fn greedy_scored(
    s: &Array2<f64>,
    budget: usize,
    matched_s: &[bool],
    matched_t: &[bool],
) -> Vec<(usize, usize, f64)> {
    let free_t: Vec<usize> = (0..s.ncols()).filter(|&v| !matched_t[v]).collect();
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for u in (0..s.nrows()).filter(|&u| !matched_s[u]) {
        let row = s.row(u);
        candidates.extend(free_t.iter().map(|&v| (row[v], u, v)));
    }
    candidates.sort_unstable_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    let mut taken_s = matched_s.to_vec();
    let mut taken_t = matched_t.to_vec();
    let mut out = Vec::with_capacity(budget.min(free_t.len()));
    for (score, u, v) in candidates {
        if out.len() == budget {
            break;
        }
        if taken_s[u] || taken_t[v] {
            continue;
        }
        taken_s[u] = true;
        taken_t[v] = true;
        out.push((u, v, score));
    }
    out
}

fn combined(s_emb: &SimilarityMatrix, acn: &AcnCounts, boost: &AcnBoost) -> Array2<f64> {
    let mut values = s_emb.values.clone();
    values.zip_mut_with(&acn.counts, |s, &c| *s *= boost.get(c));
    values
}

/// Gradual alignment from per-channel embeddings.
pub fn gradual_align(
    problem: &AlignmentProblem,
    emb: &PipelineEmbeddings,
    cfg: &MatchConfig,
) -> Result<AlignmentOutcome> {
    let s_emb = embedding_similarity(emb.original.as_ref(), &emb.augmented, cfg.lambda)?;
    gradual_align_with_similarity(problem, &s_emb, cfg)
}

/// Gradual alignment from a precomputed embedding similarity.
pub fn gradual_align_with_similarity(
    problem: &AlignmentProblem,
    s_emb: &SimilarityMatrix,
    cfg: &MatchConfig,
) -> Result<AlignmentOutcome> {
    cfg.validate()?;
    let (g_s, g_t) = (&problem.source, &problem.target);
    let (n_s, n_t) = (g_s.node_count(), g_t.node_count());
    if s_emb.shape() != (n_s, n_t) {
        return Err(AlignError::Shape(format!(
            "similarity is {:?}, graphs are {n_s} x {n_t}",
            s_emb.shape()
        )));
    }
    let max_deg = |g: &crate::graph::Graph| g.degrees().into_iter().max().unwrap_or(0);
    let boost = AcnBoost::new(cfg.p, max_deg(g_s).min(max_deg(g_t)) as u32)?;

    let mut mapping = Mapping::new();
    let mut acn = AcnCounts::zeros(n_s, n_t);
    let mut matched_s = vec![false; n_s];
    let mut matched_t = vec![false; n_t];
    for &(u, v) in problem.seed_anchors() {
        mapping.insert(u, v, 0)?;
        acn.add_pair(g_s, g_t, u, v);
        matched_s[u] = true;
        matched_t[v] = true;
    }

    let total = n_s.min(n_t);
    let remaining = total.saturating_sub(mapping.len());
    let budget = remaining.div_ceil(cfg.iterations).max(1);
    let mut trace = Vec::new();
    let mut last = None;
    let mut iteration = 0;
    while mapping.len() < total {
        iteration += 1;
        let scores = combined(s_emb, &acn, &boost);
        let batch = greedy_scored(&scores, budget, &matched_s, &matched_t);
        last = Some(scores);
        if batch.is_empty() {
            break;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(u, v, score) in &batch {
            mapping.insert(u, v, iteration)?;
            matched_s[u] = true;
            matched_t[v] = true;
            lo = lo.min(score);
            hi = hi.max(score);
        }
        for &(u, v, _) in &batch {
            acn.add_pair(g_s, g_t, u, v);
        }
        trace.push(IterationTrace {
            iteration,
            committed: batch.len(),
            min_similarity: lo,
            max_similarity: hi,
        });
    }
    let final_similarity = SimilarityMatrix::new(last.unwrap_or_else(|| combined(s_emb, &acn, &boost)));
    Ok(AlignmentOutcome {
        mapping,
        trace,
        final_similarity,
    })
}
