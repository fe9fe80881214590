//! Synthetic benchmark inputs: random graphs, noisy copies, id shuffling and
//! anchor sampling. Every function is a pure function of its inputs and seed.

use ndarray::Array2;
use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AlignError, Result};
use crate::graph::Graph;

/// Derives an independent stream seed from a base seed and a purpose tag.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(AlignError::Config(format!("edge probability must be in [0, 1], got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges, None)
}

/// Preferential attachment: a clique on `m + 1` nodes, then every new node
/// links to `m` distinct earlier nodes chosen with probability proportional
/// to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(AlignError::Config(format!(
            "attachment count must be in [1, {n}), got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m * n);
    // every edge endpoint once, so a uniform draw is degree-proportional
    let mut ends = Vec::with_capacity(2 * m * n);
    for u in 0..=m {
        for v in u + 1..=m {
            edges.push((u, v));
            ends.extend([u, v]);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for u in m + 1..n {
        picked.clear();
        while picked.len() < m {
            let v = ends[rng.gen_range(0..ends.len())];
            if !picked.contains(&v) {
                picked.push(v);
            }
        }
        for &v in &picked {
            edges.push((v, u));
            ends.extend([v, u]);
        }
    }
    Graph::new(n, edges, None)
}

/// Uniform 0/1 matrix with independent cells of the given density.
pub fn random_binary_attributes(n: usize, dim: usize, density: f64, seed: u64) -> Array2<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Array2::from_shape_simple_fn((n, dim), || if rng.gen_bool(density) { 1.0 } else { 0.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbConfig {
    pub edge_removal_rate: f64,
    pub attr_flip_rate: f64,
    pub rng_seed: u64,
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig {
            edge_removal_rate: 0.1,
            attr_flip_rate: 0.1,
            rng_seed: 0,
        }
    }
}

impl PerturbConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, rate) in [
            ("edge_removal_rate", self.edge_removal_rate),
            ("attr_flip_rate", self.attr_flip_rate),
        ] {
            if !(0.0..1.0).contains(&rate) {
                return Err(AlignError::Config(format!("{name} must be in [0, 1), got {rate}")));
            }
        }
        Ok(())
    }
}

/// Noisy copy: removes exactly `floor(rate * |E|)` edges and flips exactly
/// `floor(rate * cells)` binary attribute cells. Returns the identity
/// correspondence as ground truth.
pub fn perturb(g: &Graph, cfg: &PerturbConfig) -> Result<(Graph, Vec<(usize, usize)>)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let edges = g.edges();
    let remove = (cfg.edge_removal_rate * edges.len() as f64).floor() as usize;
    let mut dropped = vec![false; edges.len()];
    for i in index::sample(&mut rng, edges.len(), remove) {
        dropped[i] = true;
    }
    let kept = edges
        .iter()
        .zip(&dropped)
        .filter(|(_, &d)| !d)
        .map(|(&e, _)| e);

    let attributes = match g.attributes() {
        Some(x) if cfg.attr_flip_rate > 0.0 => {
            if x.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(AlignError::Config(
                    "attribute flipping needs binary (0/1) attributes".into(),
                ));
            }
            let mut x = x.clone();
            let flips = (cfg.attr_flip_rate * x.len() as f64).floor() as usize;
            let cols = x.ncols();
            for cell in index::sample(&mut rng, x.len(), flips) {
                let v = &mut x[[cell / cols, cell % cols]];
                *v = 1.0 - *v;
            }
            Some(x)
        }
        other => other.cloned(),
    };
    let noisy = Graph::new(g.node_count(), kept, attributes)?;
    let truth = (0..g.node_count()).map(|i| (i, i)).collect();
    Ok((noisy, truth))
}

/// Relabels nodes with a seeded random permutation; node `i` becomes `perm[i]`.
pub fn shuffle_nodes(g: &Graph, seed: u64) -> Result<(Graph, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..g.node_count()).collect();
    perm.shuffle(&mut rng);
    Ok((g.permuted(&perm)?, perm))
}

/// `floor(t * |ground_truth|)` pairs drawn uniformly without replacement,
/// returned sorted.
pub fn sample_anchors(ground_truth: &[(usize, usize)], t: f64, seed: u64) -> Result<Vec<(usize, usize)>> {
    if !(0.0..=1.0).contains(&t) {
        return Err(AlignError::Config(format!("anchor fraction must be in [0, 1], got {t}")));
    }
    let mut sorted = ground_truth.to_vec();
    sorted.sort_unstable();
    let k = (t * sorted.len() as f64).floor() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<_> = index::sample(&mut rng, sorted.len(), k)
        .into_iter()
        .map(|i| sorted[i])
        .collect();
    picked.sort_unstable();
    Ok(picked)
}
