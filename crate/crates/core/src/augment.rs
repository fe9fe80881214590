//! Structural attribute augmentation: centrality scores of both networks are
//! discretized with one shared equal-width binning, one-hot encoded, and bins
//! unused by either network are pruned.

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::centrality::{CentralityConfig, CentralityVector};
use crate::error::{AlignError, Result};
use crate::graph::AlignmentProblem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Binning {
    /// Fixed bin width `w`.
    Width(f64),
    /// Raw dimension `d`; the width becomes `c_max / d`.
    TargetDim(usize),
}

impl Binning {
    fn validate(&self) -> Result<()> {
        match *self {
            Binning::Width(w) if !(w > 0.0 && w.is_finite()) => {
                Err(AlignError::Config(format!("bin width must be positive, got {w}")))
            }
            Binning::TargetDim(0) => Err(AlignError::Config("target_dim must be >= 1".into())),
            _ => Ok(()),
        }
    }

    fn width(&self, c_max: f64) -> f64 {
        match *self {
            Binning::Width(w) => w,
            Binning::TargetDim(d) if c_max > 0.0 => c_max / d as f64,
            Binning::TargetDim(_) => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentConfig {
    pub binning: Binning,
    pub centrality: CentralityConfig,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            binning: Binning::TargetDim(32),
            centrality: CentralityConfig::default(),
        }
    }
}

/// One-hot structural attributes for both networks over a shared column set.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedAttributes {
    pub source: Array2<f64>,
    pub target: Array2<f64>,
    /// Upper boundary of each retained bin, in column order.
    pub bin_edges: Vec<f64>,
    pub width: f64,
}

impl AugmentedAttributes {
    pub fn dim(&self) -> usize {
        self.bin_edges.len()
    }
}

/// Number of raw bins, `max(1, ceil(c_max / w))`.
pub fn raw_dim(width: f64, c_max: f64) -> usize {
    ((c_max / width).ceil() as usize).max(1)
}

/// 1-based bin index of every score: `ceil(c / w)` clamped to `[1, raw_dim]`.
pub fn bin_assign(c: &CentralityVector, width: f64, c_max: f64) -> Vec<usize> {
    let d = raw_dim(width, c_max);
    c.values()
        .iter()
        .map(|&v| ((v / width).ceil().max(1.0) as usize).min(d))
        .collect()
}

/// Bins both centrality vectors with one width and prunes never-used bins.
pub fn augment_centralities(
    source: &CentralityVector,
    target: &CentralityVector,
    binning: Binning,
) -> Result<AugmentedAttributes> {
    binning.validate()?;
    let c_max = source.max().max(target.max());
    let width = binning.width(c_max);
    let d = raw_dim(width, c_max);
    let bins_s = bin_assign(source, width, c_max);
    let bins_t = bin_assign(target, width, c_max);

    let mut used = vec![false; d];
    for &b in bins_s.iter().chain(&bins_t) {
        used[b - 1] = true;
    }
    let mut column = vec![usize::MAX; d];
    let mut bin_edges = Vec::new();
    for (b, _) in used.iter().enumerate().filter(|(_, &u)| u) {
        column[b] = bin_edges.len();
        bin_edges.push((b + 1) as f64 * width);
    }
    let encode = |bins: &[usize]| {
        let mut x = Array2::zeros((bins.len(), bin_edges.len()));
        for (i, &b) in bins.iter().enumerate() {
            x[[i, column[b - 1]]] = 1.0;
        }
        x
    };
    Ok(AugmentedAttributes {
        source: encode(&bins_s),
        target: encode(&bins_t),
        bin_edges: bin_edges.clone(),
        width,
    })
}

/// Computes centralities of both networks with one resolved configuration,
/// then bins them jointly.
pub fn augment(problem: &AlignmentProblem, cfg: &AugmentConfig) -> Result<AugmentedAttributes> {
    let centrality = cfg
        .centrality
        .resolved_for(&[&problem.source, &problem.target]);
    let c_s = centrality.compute(&problem.source)?;
    let c_t = centrality.compute(&problem.target)?;
    augment_centralities(&c_s, &c_t, cfg.binning)
}

/// Drops columns that are zero across both matrices, preserving order.
pub fn prune_columns(source: &Array2<f64>, target: &Array2<f64>) -> (Array2<f64>, Array2<f64>) {
    let keep: Vec<usize> = (0..source.ncols())
        .filter(|&j| {
            source.column(j).iter().any(|&v| v != 0.0) || target.column(j).iter().any(|&v| v != 0.0)
        })
        .collect();
    (source.select(ndarray::Axis(1), &keep), target.select(ndarray::Axis(1), &keep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::CentralityConfig;
    use crate::graph::Graph;

    fn cv(v: &[f64]) -> CentralityVector {
        CentralityVector(v.to_vec())
    }

    #[test]
    fn bin_assignment_by_hand() {
        assert_eq!(bin_assign(&cv(&[1.0, 2.5, 3.0]), 1.0, 3.0), vec![1, 3, 3]);
        assert_eq!(raw_dim(1.0, 3.0), 3);
    }

    #[test]
    fn zero_centrality_clamped_to_first_bin() {
        assert_eq!(bin_assign(&cv(&[0.0]), 1.0, 0.0), vec![1]);
    }

    #[test]
    fn wide_bins_collapse_to_one() {
        assert_eq!(bin_assign(&cv(&[0.5, 2.0, 3.0]), 3.0, 3.0), vec![1, 1, 1]);
        assert_eq!(raw_dim(5.0, 3.0), 1);
    }

    #[test]
    fn unused_bin_is_pruned() {
        let a = augment_centralities(&cv(&[1.0, 3.0]), &cv(&[1.0, 3.0]), Binning::Width(1.0)).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.bin_edges, vec![1.0, 3.0]);
        assert_eq!(a.source.row(1).to_vec(), vec![0.0, 1.0]);
    }

    #[test]
    fn shared_maximum_across_networks() {
        // the target holds the maximum; the source still uses the same width
        let a = augment_centralities(&cv(&[1.0]), &cv(&[4.0]), Binning::TargetDim(4)).unwrap();
        assert_eq!(a.width, 1.0);
        assert_eq!(a.dim(), 2);
        assert_eq!(a.source.ncols(), a.target.ncols());
    }

    #[test]
    fn target_dim_sets_width() {
        let c = cv(&[0.3, 1.1, 2.2, 4.9, 5.0]);
        let a = augment_centralities(&c, &c, Binning::TargetDim(5)).unwrap();
        assert_eq!(a.width, 1.0);
        assert!(a.dim() <= 5);
    }

    #[test]
    fn invalid_binning_rejected() {
        let c = cv(&[1.0]);
        assert!(augment_centralities(&c, &c, Binning::Width(0.0)).is_err());
        assert!(augment_centralities(&c, &c, Binning::TargetDim(0)).is_err());
    }

    #[test]
    fn identical_networks_get_identical_rows() {
        let g = Graph::new(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)], None).unwrap();
        let p = AlignmentProblem::unlabeled(g.clone(), g);
        for centrality in [CentralityConfig::khop(2), CentralityConfig::katz()] {
            let cfg = AugmentConfig {
                binning: Binning::TargetDim(8),
                centrality,
            };
            let a = augment(&p, &cfg).unwrap();
            assert_eq!(a.source, a.target);
        }
    }

    #[test]
    fn pruning_is_idempotent() {
        let a = augment_centralities(&cv(&[0.2, 7.5, 3.1]), &cv(&[9.0, 0.1]), Binning::Width(1.0)).unwrap();
        let (s, t) = prune_columns(&a.source, &a.target);
        assert_eq!(s, a.source);
        assert_eq!(t, a.target);
    }
}
