//! Cross-network similarities: multi-layer embedding similarity, ACN
//! (aligned cross-network neighbor-pair) similarity, and their Hadamard
//! combination.

use ndarray::Array2;

use crate::encoder::{normalize_rows, LayerEmbeddings};
use crate::error::{AlignError, Result};
use crate::graph::{Graph, Mapping};

/// Dense `n_s x n_t` score matrix; row = source node.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub values: Array2<f64>,
}

impl SimilarityMatrix {
    pub fn new(values: Array2<f64>) -> Self {
        SimilarityMatrix { values }
    }

    pub fn shape(&self) -> (usize, usize) {
        self.values.dim()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.values[[u, v]]
    }
}

/// Layer embeddings of both networks from one encoder.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelEmbeddings {
    pub source: LayerEmbeddings,
    pub target: LayerEmbeddings,
}

impl ChannelEmbeddings {
    fn check(&self, what: &str) -> Result<()> {
        if self.source.num_layers() != self.target.num_layers() {
            return Err(AlignError::Shape(format!(
                "{what} channel: {} source layers vs {} target layers",
                self.source.num_layers(),
                self.target.num_layers()
            )));
        }
        Ok(())
    }

    /// Sum over layers of row-normalized `H_s H_t^T`.
    fn cosine_sum(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.source.node_count(), self.target.node_count()));
        for (h_s, h_t) in self.source.per_layer.iter().zip(&self.target.per_layer) {
            let (u_s, _) = normalize_rows(h_s);
            let (u_t, _) = normalize_rows(h_t);
            out += &u_s.dot(&u_t.t());
        }
        out
    }
}

/// `sum_l cos(H_s, H_t) + lambda * sum_l cos(H^_s, H^_t)`. Without an
/// original-attribute channel only the augmented term is used, unweighted.
pub fn embedding_similarity(
    original: Option<&ChannelEmbeddings>,
    augmented: &ChannelEmbeddings,
    lambda: f64,
) -> Result<SimilarityMatrix> {
    augmented.check("augmented")?;
    let aug = augmented.cosine_sum();
    let Some(original) = original else {
        return Ok(SimilarityMatrix::new(aug));
    };
    original.check("original")?;
    let mut values = original.cosine_sum();
    if values.dim() != aug.dim() {
        return Err(AlignError::Shape(format!(
            "channel node counts differ: {:?} vs {:?}",
            values.dim(),
            aug.dim()
        )));
    }
    values.scaled_add(lambda, &aug);
    Ok(SimilarityMatrix::new(values))
}

/// Per-pair counts of aligned cross-network neighbor pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct AcnCounts {
    pub counts: Array2<u32>,
}

impl AcnCounts {
    pub fn zeros(n_s: usize, n_t: usize) -> Self {
        AcnCounts {
            counts: Array2::zeros((n_s, n_t)),
        }
    }

    /// Registers a newly matched pair `(u', v')`: every `(u, v)` in
    /// `N(u') x N(v')` gains one ACN.
    pub fn add_pair(&mut self, g_s: &Graph, g_t: &Graph, matched_s: usize, matched_t: usize) {
        for &u in g_s.adj(matched_s) {
            let mut row = self.counts.row_mut(u);
            for &v in g_t.adj(matched_t) {
                row[v] += 1;
            }
        }
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.counts[[u, v]]
    }

    pub fn max(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }
}

/// `ACN(u, v) = |{(u', v') in mapping : u' in N(u), v' in N(v)}|`.
pub fn acn_counts(g_s: &Graph, g_t: &Graph, mapping: &Mapping) -> AcnCounts {
    let mut acn = AcnCounts::zeros(g_s.node_count(), g_t.node_count());
    for pair in mapping.pairs() {
        acn.add_pair(g_s, g_t, pair.source, pair.target);
    }
    acn
}

fn check_exponent(p: f64) -> Result<()> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(AlignError::Config(format!("ACN exponent must be positive, got {p}")));
    }
    Ok(())
}

/// Smoothed ACN similarity `(ACN + 1)^p`.
pub fn acn_similarity(counts: &AcnCounts, p: f64) -> Result<SimilarityMatrix> {
    check_exponent(p)?;
    let table = AcnBoost::new(p, counts.max())?;
    Ok(SimilarityMatrix::new(counts.counts.mapv(|c| table.get(c))))
}

/// Lookup of `(c + 1)^p` for small counts.
#[derive(Debug, Clone)]
pub(crate) struct AcnBoost {
    p: f64,
    table: Vec<f64>,
}

impl AcnBoost {
    pub(crate) fn new(p: f64, max_count: u32) -> Result<Self> {
        check_exponent(p)?;
        let table = (0..=max_count.min(1 << 16))
            .map(|c| (c as f64 + 1.0).powf(p))
            .collect();
        Ok(AcnBoost { p, table })
    }

    pub(crate) fn get(&self, count: u32) -> f64 {
        self.table
            .get(count as usize)
            .copied()
            .unwrap_or_else(|| (count as f64 + 1.0).powf(self.p))
    }
}

/// Hadamard product `S_emb ⊙ S_ACN`.
pub fn combined_similarity(s_emb: &SimilarityMatrix, s_acn: &SimilarityMatrix) -> Result<SimilarityMatrix> {
    if s_emb.shape() != s_acn.shape() {
        return Err(AlignError::Shape(format!(
            "similarity shapes differ: {:?} vs {:?}",
            s_emb.shape(),
            s_acn.shape()
        )));
    }
    Ok(SimilarityMatrix::new(&s_emb.values * &s_acn.values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Array2<f64> {
        Array2::from_shape_simple_fn((rows, cols), || rng.gen_range(-1.0..1.0))
    }

    fn channel(n_s: usize, n_t: usize, layers: usize, rng: &mut ChaCha8Rng) -> ChannelEmbeddings {
        ChannelEmbeddings {
            source: LayerEmbeddings {
                per_layer: (0..layers).map(|_| random(n_s, 4, rng)).collect(),
            },
            target: LayerEmbeddings {
                per_layer: (0..layers).map(|_| random(n_t, 4, rng)).collect(),
            },
        }
    }

    fn naive(ch: &ChannelEmbeddings, u: usize, v: usize) -> f64 {
        ch.source
            .per_layer
            .iter()
            .zip(&ch.target.per_layer)
            .map(|(a, b)| {
                let (x, y) = (a.row(u), b.row(v));
                let mut dot = 0.0;
                let mut nx = 0.0;
                let mut ny = 0.0;
                for k in 0..x.len() {
                    dot += x[k] * y[k];
                    nx += x[k] * x[k];
                    ny += y[k] * y[k];
                }
                dot / (nx.sqrt() * ny.sqrt())
            })
            .sum()
    }

    #[test]
    fn lambda_zero_keeps_first_term() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let orig = channel(3, 4, 2, &mut rng);
        let aug = channel(3, 4, 2, &mut rng);
        let both = embedding_similarity(Some(&orig), &aug, 0.0).unwrap();
        let first = embedding_similarity(None, &orig, 7.0).unwrap();
        assert_eq!(both, first);
    }

    #[test]
    fn identical_embeddings_have_unit_diagonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random(5, 3, &mut rng);
        let emb = LayerEmbeddings { per_layer: vec![h] };
        let ch = ChannelEmbeddings {
            source: emb.clone(),
            target: emb,
        };
        let s = embedding_similarity(None, &ch, 1.0).unwrap();
        for i in 0..5 {
            assert!((s.get(i, i) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let orig = channel(3, 2, 2, &mut rng);
        let aug = channel(3, 2, 2, &mut rng);
        let lambda = 0.7;
        let s = embedding_similarity(Some(&orig), &aug, lambda).unwrap();
        for u in 0..3 {
            for v in 0..2 {
                let expected = naive(&orig, u, v) + lambda * naive(&aug, u, v);
                assert!((s.get(u, v) - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn layer_count_mismatch_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut ch = channel(3, 3, 2, &mut rng);
        ch.target.per_layer.pop();
        assert!(embedding_similarity(None, &ch, 1.0).is_err());
    }

    fn square() -> Graph {
        // u = 0 adjacent to a = 1 and b = 2
        Graph::new(3, [(0, 1), (0, 2)], None).unwrap()
    }

    #[test]
    fn acn_counts_by_hand() {
        let g = square();
        let empty = acn_counts(&g, &g, &Mapping::new());
        assert_eq!(empty.max(), 0);

        let both = Mapping::from_pairs([(1, 1), (2, 2)]).unwrap();
        assert_eq!(acn_counts(&g, &g, &both).get(0, 0), 2);

        // a in N(u) but b' = 0 is not a neighbor of v = 0
        let half = Mapping::from_pairs([(1, 0)]).unwrap();
        assert_eq!(acn_counts(&g, &g, &half).get(0, 0), 0);
    }

    #[test]
    fn acn_similarity_smoothing() {
        let mut counts = AcnCounts::zeros(2, 2);
        let ones = acn_similarity(&counts, 2.5).unwrap();
        assert!(ones.values.iter().all(|&v| v == 1.0));
        counts.counts[[0, 1]] = 2;
        assert_eq!(acn_similarity(&counts, 3.0).unwrap().get(0, 1), 27.0);
        assert_eq!(acn_similarity(&counts, 1.0).unwrap().get(0, 1), 3.0);
        assert!(acn_similarity(&counts, 0.0).is_err());
        assert!(acn_similarity(&counts, -1.0).is_err());
    }

    #[test]
    fn boost_table_falls_back_beyond_range() {
        let b = AcnBoost::new(2.0, 3).unwrap();
        assert_eq!(b.get(3), 16.0);
        assert_eq!(b.get(9), 100.0);
    }

    #[test]
    fn hadamard_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = SimilarityMatrix::new(random(3, 4, &mut rng));
        let ones = SimilarityMatrix::new(Array2::ones((3, 4)));
        assert_eq!(combined_similarity(&a, &ones).unwrap(), a);
        let mut b = SimilarityMatrix::new(random(3, 4, &mut rng));
        b.values[[1, 2]] = 0.0;
        let c = combined_similarity(&a, &b).unwrap();
        assert_eq!(c.get(1, 2), 0.0);
        for u in 0..3 {
            for v in 0..4 {
                assert!((c.get(u, v) - a.get(u, v) * b.get(u, v)).abs() < 1e-12);
            }
        }
        let wrong = SimilarityMatrix::new(Array2::ones((4, 3)));
        assert!(combined_similarity(&a, &wrong).is_err());
    }
}
