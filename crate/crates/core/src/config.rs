//! Pipeline configuration and its flat `section.key = value` text format.
//!
//! ```text
//! # comments start with '#'
//! centrality.kind = katz
//! augment.target_dim = 32
//! train.epochs = 20
//! match.p = 2
//! run.anchor_fraction = 0.05
//! run.q = 1, 5, 10
//! ```
//!
//! Absent keys keep their defaults; unknown keys are rejected.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::augment::{AugmentConfig, Binning};
use crate::centrality::CentralityKind;
use crate::encoder::TrainConfig;
use crate::error::{AlignError, Result};
use crate::matcher::MatchConfig;
use crate::synth::PerturbConfig;

/// Base graph family of the synthetic benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphModel {
    /// Erdős–Rényi with `bench.edge_prob`.
    Er,
    /// Barabási–Albert with `bench.attach` links per new node.
    Ba,
}

/// Synthetic benchmark protocol settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub model: GraphModel,
    pub nodes: usize,
    pub edge_prob: f64,
    pub attach: usize,
    /// Columns of random binary attributes on the base graph; 0 for none.
    pub attr_dim: usize,
    pub seeds: usize,
    pub first_seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            model: GraphModel::Ba,
            nodes: 500,
            edge_prob: 0.02,
            attach: 5,
            attr_dim: 0,
            seeds: 5,
            first_seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub augment: AugmentConfig,
    /// When false the augmented channel is fed all-ones attributes.
    pub augmentation_enabled: bool,
    pub train: TrainConfig,
    pub matching: MatchConfig,
    /// Fraction of ground truth revealed as seed anchors.
    pub anchor_fraction: f64,
    pub qs: Vec<usize>,
    pub perturb: PerturbConfig,
    pub bench: BenchConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            augment: AugmentConfig::default(),
            augmentation_enabled: true,
            train: TrainConfig::default(),
            matching: MatchConfig::default(),
            anchor_fraction: 0.0,
            qs: vec![1, 5, 10],
            perturb: PerturbConfig::default(),
            bench: BenchConfig::default(),
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| AlignError::Config(format!("{key}: cannot parse `{value}`")))
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.train.validate()?;
        self.matching.validate()?;
        self.perturb.validate()?;
        if !(0.0..=1.0).contains(&self.anchor_fraction) {
            return Err(AlignError::Config(format!(
                "run.anchor_fraction must be in [0, 1], got {}",
                self.anchor_fraction
            )));
        }
        if self.qs.contains(&0) {
            return Err(AlignError::Config("run.q entries must be >= 1".into()));
        }
        match self.augment.binning {
            Binning::Width(w) if !(w > 0.0) => {
                Err(AlignError::Config(format!("augment.width must be positive, got {w}")))
            }
            Binning::TargetDim(0) => Err(AlignError::Config("augment.target_dim must be >= 1".into())),
            _ => Ok(()),
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let c = &mut self.augment.centrality;
        match key {
            "centrality.kind" => {
                c.kind = match value.to_ascii_lowercase().as_str() {
                    "katz" => CentralityKind::Katz,
                    "khop" | "k-hop" | "k_hop" => CentralityKind::KHop,
                    other => return Err(AlignError::Config(format!("{key}: unknown kind `{other}`"))),
                }
            }
            "centrality.k" => c.k = parse(key, value)?,
            "centrality.alpha" => c.alpha = Some(parse(key, value)?),
            "centrality.beta" => c.beta = parse(key, value)?,
            "centrality.tol" => c.tol = parse(key, value)?,
            "centrality.max_iter" => c.max_iter = parse(key, value)?,
            "augment.enabled" => self.augmentation_enabled = parse(key, value)?,
            "augment.width" => self.augment.binning = Binning::Width(parse(key, value)?),
            "augment.target_dim" => self.augment.binning = Binning::TargetDim(parse(key, value)?),
            "train.num_layers" => self.train.num_layers = parse(key, value)?,
            "train.hidden_dim" => self.train.hidden_dim = parse(key, value)?,
            "train.learning_rate" => self.train.learning_rate = parse(key, value)?,
            "train.epochs" => self.train.epochs = parse(key, value)?,
            "train.adam_beta1" => self.train.adam_beta1 = parse(key, value)?,
            "train.adam_beta2" => self.train.adam_beta2 = parse(key, value)?,
            "train.adam_eps" => self.train.adam_eps = parse(key, value)?,
            "train.seed" => self.train.rng_seed = parse(key, value)?,
            "match.iterations" => self.matching.iterations = parse(key, value)?,
            "match.p" => self.matching.p = parse(key, value)?,
            "match.lambda" => self.matching.lambda = parse(key, value)?,
            "match.seed" => self.matching.rng_seed = parse(key, value)?,
            "run.anchor_fraction" => self.anchor_fraction = parse(key, value)?,
            "run.q" => {
                self.qs = value
                    .split(',')
                    .map(|q| parse(key, q.trim()))
                    .collect::<Result<_>>()?
            }
            "perturb.edge_removal_rate" => self.perturb.edge_removal_rate = parse(key, value)?,
            "perturb.attr_flip_rate" => self.perturb.attr_flip_rate = parse(key, value)?,
            "perturb.seed" => self.perturb.rng_seed = parse(key, value)?,
            "bench.model" => {
                self.bench.model = match value.to_ascii_lowercase().as_str() {
                    "er" => GraphModel::Er,
                    "ba" => GraphModel::Ba,
                    other => return Err(AlignError::Config(format!("{key}: unknown model `{other}`"))),
                }
            }
            "bench.attach" => self.bench.attach = parse(key, value)?,
            "bench.nodes" => self.bench.nodes = parse(key, value)?,
            "bench.edge_prob" => self.bench.edge_prob = parse(key, value)?,
            "bench.attr_dim" => self.bench.attr_dim = parse(key, value)?,
            "bench.seeds" => self.bench.seeds = parse(key, value)?,
            "bench.first_seed" => self.bench.first_seed = parse(key, value)?,
            _ => return Err(AlignError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                AlignError::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())
                .map_err(|e| AlignError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        self.validate()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AlignError::io(path, e))?;
        text.parse()
    }

    /// Every setting as `key = value` lines; parses back to an equal config.
    pub fn to_text(&self) -> String {
        let c = &self.augment.centrality;
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put(
            "centrality.kind",
            match c.kind {
                CentralityKind::Katz => "katz".into(),
                CentralityKind::KHop => "khop".into(),
            },
        );
        put("centrality.k", c.k.to_string());
        if let Some(a) = c.alpha {
            put("centrality.alpha", a.to_string());
        }
        put("centrality.beta", c.beta.to_string());
        put("centrality.tol", c.tol.to_string());
        put("centrality.max_iter", c.max_iter.to_string());
        put("augment.enabled", self.augmentation_enabled.to_string());
        match self.augment.binning {
            Binning::Width(w) => put("augment.width", w.to_string()),
            Binning::TargetDim(d) => put("augment.target_dim", d.to_string()),
        }
        let t = &self.train;
        put("train.num_layers", t.num_layers.to_string());
        put("train.hidden_dim", t.hidden_dim.to_string());
        put("train.learning_rate", t.learning_rate.to_string());
        put("train.epochs", t.epochs.to_string());
        put("train.adam_beta1", t.adam_beta1.to_string());
        put("train.adam_beta2", t.adam_beta2.to_string());
        put("train.adam_eps", t.adam_eps.to_string());
        put("train.seed", t.rng_seed.to_string());
        let m = &self.matching;
        put("match.iterations", m.iterations.to_string());
        put("match.p", m.p.to_string());
        put("match.lambda", m.lambda.to_string());
        put("match.seed", m.rng_seed.to_string());
        put("run.anchor_fraction", self.anchor_fraction.to_string());
        put(
            "run.q",
            self.qs.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
        );
        let p = &self.perturb;
        put("perturb.edge_removal_rate", p.edge_removal_rate.to_string());
        put("perturb.attr_flip_rate", p.attr_flip_rate.to_string());
        put("perturb.seed", p.rng_seed.to_string());
        let b = &self.bench;
        put(
            "bench.model",
            match b.model {
                GraphModel::Er => "er".into(),
                GraphModel::Ba => "ba".into(),
            },
        );
        put("bench.nodes", b.nodes.to_string());
        put("bench.edge_prob", b.edge_prob.to_string());
        put("bench.attach", b.attach.to_string());
        put("bench.attr_dim", b.attr_dim.to_string());
        put("bench.seeds", b.seeds.to_string());
        put("bench.first_seed", b.first_seed.to_string());
        out
    }
}

impl FromStr for RunConfig {
    type Err = AlignError;

    fn from_str(s: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(s)?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bench_model_key() {
        let cfg: RunConfig = "bench.model = er\nbench.attach = 3\n".parse().unwrap();
        assert_eq!(cfg.bench.model, GraphModel::Er);
        assert_eq!(cfg.bench.attach, 3);
        assert!("bench.model = lattice".parse::<RunConfig>().is_err());
    }

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!("".parse::<RunConfig>().unwrap(), RunConfig::default());
    }

    #[test]
    fn keys_override_defaults() {
        let cfg: RunConfig = "# c\ncentrality.kind = khop\ncentrality.k = 2\naugment.width = 0.5\nrun.q = 1, 10\nmatch.p=3\n"
            .parse()
            .unwrap();
        assert_eq!(cfg.augment.centrality.kind, CentralityKind::KHop);
        assert_eq!(cfg.augment.centrality.k, 2);
        assert_eq!(cfg.augment.binning, Binning::Width(0.5));
        assert_eq!(cfg.qs, vec![1, 10]);
        assert_eq!(cfg.matching.p, 3.0);
        assert_eq!(cfg.train, TrainConfig::default());
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::default();
        cfg.augment.centrality.alpha = Some(0.05);
        cfg.train.learning_rate = 0.001;
        cfg.anchor_fraction = 0.4;
        assert_eq!(cfg.to_text().parse::<RunConfig>().unwrap(), cfg);
    }

    #[test]
    fn bad_input_rejected() {
        assert!("nope.key = 1".parse::<RunConfig>().is_err());
        assert!("train.epochs = many".parse::<RunConfig>().is_err());
        assert!("train.epochs".parse::<RunConfig>().is_err());
        assert!("run.anchor_fraction = 2".parse::<RunConfig>().is_err());
        assert!("match.iterations = 0".parse::<RunConfig>().is_err());
    }
}
