//! Numerical self-checks for the encoder: finite-difference validation of the
//! hand-written gradients, and the embedding-distance bound for consistent
//! attributes under a shared linear layer.

use nalgebra::DMatrix;
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{forward_cached, loss_and_gradient, loss_only, Activation, EncoderParams, TrainConfig, TrainingGraph};
use crate::graph::Graph;

const FD_STEP: f64 = 1e-5;
const KINK_MARGIN: f64 = 1e-3;
const REL_FLOOR: f64 = 1e-6;

fn random_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges, None).expect("endpoints in range")
}

fn random_matrix(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Array2<f64> {
    Array2::from_shape_simple_fn((rows, cols), || rng.gen_range(lo..hi))
}

/// Smallest |pre-activation| over entries whose aggregated input row is not
/// identically zero (rows that are zero stay zero under any weight change).
fn kink_distance(graphs: &[TrainingGraph<'_>], params: &EncoderParams) -> f64 {
    let mut closest = f64::INFINITY;
    for tg in graphs {
        let cache = forward_cached(&tg.prop, tg.attrs, params);
        for (input, z) in cache.inputs.iter().zip(&cache.pre_activations) {
            let aggregated = tg.prop.apply(input);
            for (agg_row, z_row) in aggregated.outer_iter().zip(z.outer_iter()) {
                if agg_row.iter().any(|&v| v != 0.0) {
                    closest = z_row.iter().fold(closest, |m, v| m.min(v.abs()));
                }
            }
        }
    }
    closest
}

/// Max relative error between analytic and central-difference gradients of
/// the reconstruction loss, on a random problem with at most 8 nodes per
/// network.
pub fn gradient_check(cfg: &TrainConfig, trial_seed: u64) -> f64 {
    gradient_check_with(cfg, trial_seed, Activation::Relu)
}

pub fn gradient_check_with(cfg: &TrainConfig, trial_seed: u64, activation: Activation) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let n_s = rng.gen_range(3..=8);
    let n_t = rng.gen_range(3..=8);
    let g_s = random_graph(n_s, 0.4, &mut rng);
    let g_t = random_graph(n_t, 0.4, &mut rng);
    let dim = rng.gen_range(2..=4);
    let x_s = random_matrix(n_s, dim, 0.0, 1.0, &mut rng);
    let x_t = random_matrix(n_t, dim, 0.0, 1.0, &mut rng);
    let graphs = [TrainingGraph::new(&g_s, &x_s), TrainingGraph::new(&g_t, &x_t)];

    let mut params = EncoderParams::init(dim, cfg, &mut rng);
    params.activation = activation;
    if activation == Activation::Relu {
        // move off relu kinks so the finite differences stay on one linear piece
        for _ in 0..1000 {
            if kink_distance(&graphs, &params) > KINK_MARGIN {
                break;
            }
            for layer in &mut params.layers {
                layer.weight.mapv_inplace(|w| w + rng.gen_range(-0.05..0.05));
            }
        }
    }

    let (_, analytic) = loss_and_gradient(&graphs, &params);
    let mut worst = 0.0f64;
    #[allow(clippy::needless_range_loop)]
    for l in 0..params.layers.len() {
        let shape = params.layers[l].weight.dim();
        for i in 0..shape.0 {
            for j in 0..shape.1 {
                let original = params.layers[l].weight[[i, j]];
                params.layers[l].weight[[i, j]] = original + FD_STEP;
                let plus = loss_only(&graphs, &params);
                params.layers[l].weight[[i, j]] = original - FD_STEP;
                let minus = loss_only(&graphs, &params);
                params.layers[l].weight[[i, j]] = original;
                let numeric = (plus - minus) / (2.0 * FD_STEP);
                let exact = analytic[l][[i, j]];
                let denom = exact.abs().max(numeric.abs()).max(REL_FLOOR);
                worst = worst.max((exact - numeric).abs() / denom);
            }
        }
    }
    worst
}

/// A trial in which the embedding distance exceeded the bound.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundViolation {
    pub trial: usize,
    pub node: usize,
    pub distance: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub trials: usize,
    pub passed_trials: usize,
    /// Largest observed `distance / (sigma_max(W) * epsilon)` (0 when epsilon is 0).
    pub max_ratio: f64,
    pub first_violation: Option<BoundViolation>,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none()
    }
}

fn spectral_norm(w: &Array2<f64>) -> f64 {
    let m = DMatrix::from_fn(w.nrows(), w.ncols(), |i, j| w[[i, j]]);
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Row-stochastic `D^-1 (A + I)` as dense rows; weights of every row sum to 1.
fn mean_aggregation(g: &Graph) -> Vec<Vec<(usize, f64)>> {
    (0..g.node_count())
        .map(|i| {
            let w = 1.0 / (g.degree(i) + 1) as f64;
            std::iter::once((i, w))
                .chain(g.adj(i).iter().map(|&j| (j, w)))
                .collect()
        })
        .collect()
}

fn pre_activation_row(agg: &[(usize, f64)], x: &Array2<f64>, w: &Array2<f64>) -> ndarray::Array1<f64> {
    let mut pooled = ndarray::Array1::zeros(x.ncols());
    for &(j, a) in agg {
        pooled.scaled_add(a, &x.row(j));
    }
    pooled.dot(w)
}

/// Checks `||h_u,s - h_v,t||_2 <= sigma_max(W) * epsilon` for ground-truth
/// pairs whose neighborhoods are fully matched and whose matched attribute
/// rows differ by at most `epsilon`, using pre-activation outputs of one
/// mean-aggregating graph convolution with a shared weight matrix.
pub fn theorem_bound_check(epsilon: f64, trials: usize, rng_seed: u64) -> BoundCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut report = BoundCheck {
        trials,
        passed_trials: 0,
        max_ratio: 0.0,
        first_violation: None,
    };
    for trial in 0..trials {
        let n = rng.gen_range(4..=16);
        let source = random_graph(n, 0.3, &mut rng);
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let target = source.permuted(&perm).expect("valid permutation");
        let dim = rng.gen_range(2..=8);
        let hidden = rng.gen_range(2..=8);

        let x_s = random_matrix(n, dim, 0.0, 1.0, &mut rng);
        let mut x_t = Array2::zeros((n, dim));
        for j in 0..n {
            let direction: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = direction.iter().map(|v| v * v).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            let radius = epsilon * rng.gen_range(0.0..=1.0);
            for k in 0..dim {
                x_t[[perm[j], k]] = x_s[[j, k]] + radius * direction[k] / norm;
            }
        }
        let w = random_matrix(dim, hidden, -1.0, 1.0, &mut rng);
        let bound = spectral_norm(&w) * epsilon;

        let agg_s = mean_aggregation(&source);
        let agg_t = mean_aggregation(&target);
        let mut ok = true;
        for u in 0..n {
            let h_s = pre_activation_row(&agg_s[u], &x_s, &w);
            let h_t = pre_activation_row(&agg_t[perm[u]], &x_t, &w);
            let distance = (&h_s - &h_t).mapv(|v| v * v).sum().sqrt();
            // rounding slack: summation order differs between the two networks
            let slack = 1e-12 * (1.0 + h_s.mapv(f64::abs).sum());
            if bound > 0.0 {
                report.max_ratio = report.max_ratio.max(distance / bound);
            }
            if distance > bound + slack {
                ok = false;
                report.first_violation.get_or_insert(BoundViolation {
                    trial,
                    node: u,
                    distance,
                    bound,
                });
            }
        }
        if ok {
            report.passed_trials += 1;
        }
    }
    report
}
