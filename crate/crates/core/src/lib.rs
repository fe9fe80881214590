//! Network alignment by gradual node matching over GNN embeddings of
//! centrality-augmented node attributes.
//!
//! Pipeline:
//!
//! 1. [`augment`]: k-hop or Katz centrality of every node is binned with one
//!    shared equal-width binning and one-hot encoded.
//! 2. [`encoder`]: GIN-style encoders (one per attribute channel, weights
//!    shared across the two networks) are trained with a layer-wise adjacency
//!    reconstruction loss.
//! 3. [`similarity`]: per-layer cosine similarities are summed across layers
//!    and channels, then multiplied element-wise by the smoothed ACN score
//!    `(ACN + 1)^p`.
//! 4. [`matcher`]: pairs are committed in confidence-ordered batches; each
//!    batch adds ACNs that sharpen the next one.
//!
//! [`pipeline::run`] composes the steps and [`bench`] runs the synthetic
//! protocol.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod augment;
pub mod bench;
pub mod centrality;
pub mod cli;
pub mod config;
pub mod encoder;
pub mod error;
pub mod graph;
pub mod io;
pub mod matcher;
pub mod metrics;
pub mod pipeline;
pub mod similarity;
pub mod synth;

pub use augment::{augment, AugmentConfig, AugmentedAttributes, Binning};
pub use centrality::{katz_centrality, khop_centrality, CentralityConfig, CentralityKind, CentralityVector};
pub use config::RunConfig;
pub use encoder::{gin_forward, train, EncoderParams, LayerEmbeddings, TrainConfig};
pub use error::{AlignError, Result};
pub use graph::{normalized_adjacency, AlignmentProblem, Graph, Mapping};
pub use matcher::{gradual_align, AlignmentOutcome, MatchConfig, PipelineEmbeddings};
pub use metrics::EvalReport;
pub use similarity::{ChannelEmbeddings, SimilarityMatrix};
