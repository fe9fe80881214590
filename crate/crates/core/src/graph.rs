//! Undirected graphs, alignment problems and one-to-one node mappings.

use std::collections::{HashMap, HashSet};

use ndarray::Array2;

use crate::error::{AlignError, Result};

/// Immutable undirected graph over dense node ids `0..node_count`.
///
/// Self-loops and duplicate edges are dropped at construction; edge direction
/// is ignored. An optional attribute matrix carries one row per node.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
    attributes: Option<Array2<f64>>,
}

impl Graph {
    pub fn new<I>(node_count: usize, edges: I, attributes: Option<Array2<f64>>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); node_count];
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(AlignError::EndpointOutOfRange { u, v, node_count });
            }
            if u == v {
                continue;
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let edges = adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        let graph = Graph {
            adjacency,
            edges,
            attributes: None,
        };
        graph.with_attributes(attributes)
    }

    /// Replaces the attribute matrix, checking its row count.
    pub fn with_attributes(mut self, attributes: Option<Array2<f64>>) -> Result<Self> {
        if let Some(x) = &attributes {
            if x.nrows() != self.node_count() {
                return Err(AlignError::Shape(format!(
                    "attribute matrix has {} rows, graph has {} nodes",
                    x.nrows(),
                    self.node_count()
                )));
            }
        }
        self.attributes = attributes;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Canonical edge list, each pair `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn attributes(&self) -> Option<&Array2<f64>> {
        self.attributes.as_ref()
    }

    /// Sorted, duplicate-free neighbor list of `node`.
    pub fn neighbors(&self, node: usize) -> Result<&[usize]> {
        self.adjacency
            .get(node)
            .map(Vec::as_slice)
            .ok_or(AlignError::NodeOutOfRange {
                node,
                node_count: self.node_count(),
            })
    }

    /// Neighbor list without the bounds check; panics on an invalid id.
    pub(crate) fn adj(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.node_count() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Relabels node `i` as `perm[i]`, carrying attribute rows along.
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.node_count();
        check_permutation(perm, n)?;
        let edges = self.edges.iter().map(|&(u, v)| (perm[u], perm[v]));
        let attributes = self.attributes.as_ref().map(|x| {
            let mut out = Array2::zeros(x.raw_dim());
            for (i, row) in x.outer_iter().enumerate() {
                out.row_mut(perm[i]).assign(&row);
            }
            out
        });
        Graph::new(n, edges, attributes)
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(AlignError::Shape(format!(
            "permutation of length {} for {} nodes",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(AlignError::Config(format!("not a permutation: entry {p}")));
        }
    }
    Ok(())
}

/// Symmetrically normalized adjacency with self-loops,
/// `D^(-1/2) (A + I) D^(-1/2)` where `D` is the degree matrix of `A + I`.
pub fn normalized_adjacency(g: &Graph) -> Array2<f64> {
    let n = g.node_count();
    let scale: Vec<f64> = (0..n)
        .map(|i| 1.0 / ((g.degree(i) + 1) as f64).sqrt())
        .collect();
    let mut a = Array2::zeros((n, n));
    for i in 0..n {
        a[[i, i]] = scale[i] * scale[i];
        for &j in g.adj(i) {
            a[[i, j]] = scale[i] * scale[j];
        }
    }
    a
}

/// Two graphs to align, the known correspondence, and the anchors revealed
/// as supervision.
#[derive(Debug, Clone)]
pub struct AlignmentProblem {
    pub source: Graph,
    pub target: Graph,
    ground_truth: Vec<(usize, usize)>,
    seed_anchors: Vec<(usize, usize)>,
}

impl AlignmentProblem {
    pub fn new(
        source: Graph,
        target: Graph,
        mut ground_truth: Vec<(usize, usize)>,
        mut seed_anchors: Vec<(usize, usize)>,
    ) -> Result<Self> {
        ground_truth.sort_unstable();
        seed_anchors.sort_unstable();
        check_one_to_one(&ground_truth, source.node_count(), target.node_count())
            .map_err(|e| AlignError::Mapping(format!("ground truth: {e}")))?;
        check_one_to_one(&seed_anchors, source.node_count(), target.node_count())
            .map_err(|e| AlignError::Mapping(format!("seed anchors: {e}")))?;
        let truth: HashSet<_> = ground_truth.iter().collect();
        if let Some(p) = seed_anchors.iter().find(|p| !truth.contains(p)) {
            return Err(AlignError::Mapping(format!(
                "seed anchor {p:?} is not a ground-truth pair"
            )));
        }
        Ok(AlignmentProblem {
            source,
            target,
            ground_truth,
            seed_anchors,
        })
    }

    /// Problem without any known correspondence, for unsupervised runs on
    /// real inputs.
    pub fn unlabeled(source: Graph, target: Graph) -> Self {
        AlignmentProblem {
            source,
            target,
            ground_truth: Vec::new(),
            seed_anchors: Vec::new(),
        }
    }

    pub fn ground_truth(&self) -> &[(usize, usize)] {
        &self.ground_truth
    }

    pub fn seed_anchors(&self) -> &[(usize, usize)] {
        &self.seed_anchors
    }

    /// Same problem with a different anchor set.
    pub fn with_seed_anchors(self, seeds: Vec<(usize, usize)>) -> Result<Self> {
        AlignmentProblem::new(self.source, self.target, self.ground_truth, seeds)
    }
}

fn check_one_to_one(pairs: &[(usize, usize)], n_s: usize, n_t: usize) -> Result<(), String> {
    let mut seen_s = HashSet::new();
    let mut seen_t = HashSet::new();
    for &(u, v) in pairs {
        if u >= n_s || v >= n_t {
            return Err(format!("pair ({u}, {v}) out of range"));
        }
        if !seen_s.insert(u) {
            return Err(format!("source node {u} appears twice"));
        }
        if !seen_t.insert(v) {
            return Err(format!("target node {v} appears twice"));
        }
    }
    Ok(())
}

/// A committed cross-network pair and the matching iteration that produced it.
/// Iteration 0 marks seed anchors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MappedPair {
    pub source: usize,
    pub target: usize,
    pub iteration: usize,
}

/// Growing one-to-one partial correspondence between source and target nodes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Mapping {
    pairs: Vec<MappedPair>,
    forward: HashMap<usize, usize>,
    backward: HashMap<usize, usize>,
}

impl Mapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Mapping::new();
        for (u, v) in pairs {
            m.insert(u, v, 0)?;
        }
        Ok(m)
    }

    /// Adds `(source, target)`; rejects a node already used on either side.
    pub fn insert(&mut self, source: usize, target: usize, iteration: usize) -> Result<()> {
        if let Some(&t) = self.forward.get(&source) {
            return Err(AlignError::Mapping(format!(
                "source node {source} already mapped to {t}"
            )));
        }
        if let Some(&s) = self.backward.get(&target) {
            return Err(AlignError::Mapping(format!(
                "target node {target} already mapped from {s}"
            )));
        }
        self.forward.insert(source, target);
        self.backward.insert(target, source);
        self.pairs.push(MappedPair {
            source,
            target,
            iteration,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Pairs in insertion order.
    pub fn pairs(&self) -> &[MappedPair] {
        &self.pairs
    }

    pub fn target_of(&self, source: usize) -> Option<usize> {
        self.forward.get(&source).copied()
    }

    pub fn source_of(&self, target: usize) -> Option<usize> {
        self.backward.get(&target).copied()
    }

    pub fn contains(&self, source: usize, target: usize) -> bool {
        self.target_of(source) == Some(target)
    }

    /// `(source, target)` pairs sorted by source id.
    pub fn sorted_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.pairs.iter().map(|p| (p.source, p.target)).collect();
        out.sort_unstable();
        out
    }
}
