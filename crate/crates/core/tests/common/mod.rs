//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use netalign::{Graph, Mapping};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p) drawn with an RNG independent of the library's generator.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges, None).unwrap()
}

pub fn dense_adjacency(g: &Graph) -> DMatrix<f64> {
    let n = g.node_count();
    let mut a = DMatrix::zeros(n, n);
    for &(u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

/// beta (I - alpha A)^-1 1 by LU.
pub fn katz_dense(g: &Graph, alpha: f64, beta: f64) -> Vec<f64> {
    let n = g.node_count();
    let m = DMatrix::identity(n, n) - dense_adjacency(g) * alpha;
    let rhs = DVector::from_element(n, beta);
    m.lu().solve(&rhs).expect("I - alpha A is invertible").iter().copied().collect()
}

/// Largest adjacency eigenvalue from a symmetric eigendecomposition.
pub fn spectral_radius(g: &Graph) -> f64 {
    if g.node_count() == 0 {
        return 0.0;
    }
    let eig = dense_adjacency(g).symmetric_eigen();
    eig.eigenvalues.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// All-pairs hop distances by Floyd–Warshall.
pub fn hop_distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Cumulative within-l counts (excluding the node itself), attenuated per layer.
pub fn khop_bruteforce(g: &Graph, k: usize, alpha: f64) -> Vec<f64> {
    let d = hop_distances(g);
    (0..g.node_count())
        .map(|i| {
            let mut score = 0.0;
            let mut penalty = 1.0;
            for l in 1..=k {
                let within = (0..g.node_count()).filter(|&j| j != i && d[i][j] <= l).count();
                score += within as f64 / penalty;
                penalty *= alpha;
            }
            score
        })
        .collect()
}

/// ACN counts by enumerating every (u, v) and every neighbor pair.
pub fn acn_bruteforce(g_s: &Graph, g_t: &Graph, mapping: &Mapping) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0u32; g_t.node_count()]; g_s.node_count()];
    for (u, row) in out.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            for &a in g_s.neighbors(u).unwrap() {
                for &b in g_t.neighbors(v).unwrap() {
                    if mapping.contains(a, b) {
                        *cell += 1;
                    }
                }
            }
        }
    }
    out
}

/// A random one-to-one partial mapping of up to `size` pairs.
pub fn random_partial_mapping(rng: &mut ChaCha8Rng, n_s: usize, n_t: usize, size: usize) -> Mapping {
    let src = rand::seq::index::sample(rng, n_s, size.min(n_s).min(n_t)).into_vec();
    let tgt = rand::seq::index::sample(rng, n_t, src.len()).into_vec();
    Mapping::from_pairs(src.into_iter().zip(tgt)).unwrap()
}
