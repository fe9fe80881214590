//! End-to-end alignment: augment, train both attribute channels, embed, and
//! match gradually.

use ndarray::Array2;

use crate::augment::{augment, AugmentedAttributes};
use crate::config::RunConfig;
use crate::encoder::{gin_forward, train, TrainConfig, TrainOutcome};
use crate::error::Result;
use crate::graph::AlignmentProblem;
use crate::matcher::{gradual_align, AlignmentOutcome, PipelineEmbeddings};
use crate::metrics::EvalReport;
use crate::similarity::ChannelEmbeddings;
use crate::synth::derive_seed;

const AUGMENTED_CHANNEL: u64 = 1;
const ORIGINAL_CHANNEL: u64 = 2;

#[derive(Debug, Clone)]
pub struct EmbeddingRun {
    pub embeddings: PipelineEmbeddings,
    /// `None` when augmentation is disabled and all-ones inputs are used.
    pub augmented_attributes: Option<AugmentedAttributes>,
    pub augmented_training: TrainOutcome,
    pub original_training: Option<TrainOutcome>,
}

#[derive(Debug, Clone)]
pub struct PipelineResult {
    pub embedding: EmbeddingRun,
    pub outcome: AlignmentOutcome,
    /// Present when the problem carries ground truth beyond the seeds.
    pub report: Option<EvalReport>,
}

fn channel_train_config(cfg: &TrainConfig, channel: u64) -> TrainConfig {
    TrainConfig {
        rng_seed: derive_seed(cfg.rng_seed, channel),
        ..cfg.clone()
    }
}

fn embed_channel(
    problem: &AlignmentProblem,
    x_s: &Array2<f64>,
    x_t: &Array2<f64>,
    cfg: &TrainConfig,
) -> Result<(ChannelEmbeddings, TrainOutcome)> {
    let trained = train(&problem.source, &problem.target, x_s, x_t, cfg)?;
    let source = gin_forward(&problem.source, x_s, &trained.params)?;
    let target = gin_forward(&problem.target, x_t, &trained.params)?;
    Ok((ChannelEmbeddings { source, target }, trained))
}

/// Trains the augmented channel and, when both graphs carry attributes, the
/// original-attribute channel. The channels share nothing.
pub fn embed(problem: &AlignmentProblem, cfg: &RunConfig) -> Result<EmbeddingRun> {
    let (n_s, n_t) = (problem.source.node_count(), problem.target.node_count());
    let (augmented_attributes, x_s, x_t) = if cfg.augmentation_enabled {
        let aug = augment(problem, &cfg.augment)?;
        let (s, t) = (aug.source.clone(), aug.target.clone());
        (Some(aug), s, t)
    } else {
        (None, Array2::ones((n_s, 1)), Array2::ones((n_t, 1)))
    };
    let (augmented, augmented_training) =
        embed_channel(problem, &x_s, &x_t, &channel_train_config(&cfg.train, AUGMENTED_CHANNEL))?;

    let (original, original_training) = match (problem.source.attributes(), problem.target.attributes()) {
        (Some(a_s), Some(a_t)) => {
            let (ch, tr) =
                embed_channel(problem, a_s, a_t, &channel_train_config(&cfg.train, ORIGINAL_CHANNEL))?;
            (Some(ch), Some(tr))
        }
        _ => (None, None),
    };
    Ok(EmbeddingRun {
        embeddings: PipelineEmbeddings { original, augmented },
        augmented_attributes,
        augmented_training,
        original_training,
    })
}

pub fn run(problem: &AlignmentProblem, cfg: &RunConfig) -> Result<PipelineResult> {
    cfg.validate()?;
    let embedding = embed(problem, cfg)?;
    let outcome = gradual_align(problem, &embedding.embeddings, &cfg.matching)?;
    let has_targets = problem.ground_truth().len() > problem.seed_anchors().len();
    let report = if has_targets {
        let n_t = problem.target.node_count();
        let qs: Vec<usize> = cfg.qs.iter().copied().filter(|&q| q <= n_t).collect();
        Some(EvalReport::compute(
            &outcome.mapping,
            Some(&outcome.final_similarity),
            problem.ground_truth(),
            problem.seed_anchors(),
            &qs,
        )?)
    } else {
        None
    };
    Ok(PipelineResult {
        embedding,
        outcome,
        report,
    })
}
