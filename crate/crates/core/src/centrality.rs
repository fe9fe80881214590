//! Node influence scores used to derive structural attributes: k-hop
//! centrality (attenuated cumulative neighborhood sizes) and Katz centrality.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{AlignError, Result};
use crate::graph::Graph;

const SPECTRAL_ITERS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentralityKind {
    KHop,
    Katz,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentralityConfig {
    pub kind: CentralityKind,
    /// Hop radius, k-hop only.
    pub k: usize,
    /// Penalizing constant (k-hop) or attenuation factor (Katz). `None`
    /// selects the default: 2 for k-hop, `min(0.9 / rho, 0.1)` for Katz where
    /// `rho` is the adjacency spectral radius.
    pub alpha: Option<f64>,
    pub beta: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for CentralityConfig {
    fn default() -> Self {
        CentralityConfig {
            kind: CentralityKind::Katz,
            k: 1,
            alpha: None,
            beta: 1.0,
            tol: 1e-10,
            max_iter: 1000,
        }
    }
}

impl CentralityConfig {
    pub fn khop(k: usize) -> Self {
        CentralityConfig {
            kind: CentralityKind::KHop,
            k,
            ..Default::default()
        }
    }

    pub fn katz() -> Self {
        CentralityConfig::default()
    }

    /// Fills in a default `alpha` valid for every graph in `graphs`.
    pub fn resolved_for(&self, graphs: &[&Graph]) -> CentralityConfig {
        let mut cfg = self.clone();
        if cfg.alpha.is_none() {
            cfg.alpha = Some(match cfg.kind {
                CentralityKind::KHop => 2.0,
                CentralityKind::Katz => {
                    let rho = graphs
                        .iter()
                        .map(|g| spectral_radius_estimate(g, SPECTRAL_ITERS))
                        .fold(0.0, f64::max);
                    default_katz_alpha(rho)
                }
            });
        }
        cfg
    }

    pub fn compute(&self, g: &Graph) -> Result<CentralityVector> {
        let cfg = self.resolved_for(&[g]);
        let alpha = cfg.alpha.unwrap_or_default();
        match cfg.kind {
            CentralityKind::KHop => khop_centrality(g, cfg.k, alpha),
            CentralityKind::Katz => katz_centrality(g, alpha, cfg.beta, cfg.tol, cfg.max_iter),
        }
    }
}

pub fn default_katz_alpha(spectral_radius: f64) -> f64 {
    if spectral_radius > 0.0 {
        (0.9 / spectral_radius).min(0.1)
    } else {
        0.1
    }
}

/// One score per node.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector(pub Vec<f64>);

impl CentralityVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(0.0, f64::max)
    }
}

/// `c_i = sum_{l=1..k} n_l(i) / alpha^(l-1)` where `n_l(i)` counts nodes other
/// than `i` at distance at most `l`.
pub fn khop_centrality(g: &Graph, k: usize, alpha: f64) -> Result<CentralityVector> {
    if k < 1 {
        return Err(AlignError::Config(format!("k-hop radius must be >= 1, got {k}")));
    }
    if !(alpha >= 1.0) {
        return Err(AlignError::Config(format!(
            "k-hop penalizing constant must be >= 1, got {alpha}"
        )));
    }
    let n = g.node_count();
    let mut dist = vec![usize::MAX; n];
    let mut touched = Vec::new();
    let mut queue = VecDeque::new();
    let mut scores = Vec::with_capacity(n);
    for start in 0..n {
        // layer_sizes[l - 1] = number of nodes at exactly distance l
        let mut layer_sizes = vec![0usize; k];
        dist[start] = 0;
        touched.push(start);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            if d == k {
                continue;
            }
            for &v in g.adj(u) {
                if dist[v] == usize::MAX {
                    dist[v] = d + 1;
                    layer_sizes[d] += 1;
                    touched.push(v);
                    queue.push_back(v);
                }
            }
        }
        for v in touched.drain(..) {
            dist[v] = usize::MAX;
        }
        let mut within = 0usize;
        let mut score = 0.0;
        let mut penalty = 1.0;
        for size in layer_sizes {
            within += size;
            score += within as f64 / penalty;
            penalty *= alpha;
        }
        scores.push(score);
    }
    Ok(CentralityVector(scores))
}

/// Fixed point of `c = alpha * A c + beta`, by Jacobi iteration from `beta * 1`.
pub fn katz_centrality(
    g: &Graph,
    alpha: f64,
    beta: f64,
    tol: f64,
    max_iter: usize,
) -> Result<CentralityVector> {
    if !(alpha > 0.0) || !(beta > 0.0) || !(tol > 0.0) || max_iter == 0 {
        return Err(AlignError::Config(format!(
            "katz requires alpha > 0, beta > 0, tol > 0, max_iter >= 1 (got {alpha}, {beta}, {tol}, {max_iter})"
        )));
    }
    let rho = spectral_radius_estimate(g, SPECTRAL_ITERS);
    if alpha * rho >= 1.0 {
        return Err(AlignError::NonConvergence {
            alpha,
            spectral_radius: rho,
        });
    }
    let n = g.node_count();
    let mut c = vec![beta; n];
    let mut next = vec![0.0; n];
    for _ in 0..max_iter {
        let mut delta = 0.0f64;
        for (i, out) in next.iter_mut().enumerate() {
            let s: f64 = g.adj(i).iter().map(|&j| c[j]).sum();
            *out = alpha * s + beta;
            delta = delta.max((*out - c[i]).abs());
        }
        std::mem::swap(&mut c, &mut next);
        if !delta.is_finite() {
            break;
        }
        if delta <= tol {
            return Ok(CentralityVector(c));
        }
    }
    Err(AlignError::NonConvergence {
        alpha,
        spectral_radius: rho,
    })
}

/// Power-iteration estimate of the largest adjacency eigenvalue magnitude.
pub fn spectral_radius_estimate(g: &Graph, iters: usize) -> f64 {
    let n = g.node_count();
    if n == 0 || g.edge_count() == 0 {
        return 0.0;
    }
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    let mut estimate = 0.0;
    for _ in 0..iters.max(1) {
        for (i, out) in y.iter_mut().enumerate() {
            *out = g.adj(i).iter().map(|&j| x[j]).sum();
        }
        let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        estimate = norm;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / norm;
        }
    }
    estimate
}
