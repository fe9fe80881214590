//! Aligns an Erdős–Rényi graph with an id-shuffled copy of itself, without
//! attributes or anchors, using Katz-based augmentation.
//!
//! ```bash
//! cargo run --release -p netalign --example self_alignment -- 200 0.05 1
//! ```

use std::time::Instant;

use netalign::synth::{erdos_renyi, shuffle_nodes};
use netalign::{pipeline, AlignmentProblem, RunConfig};

fn main() -> netalign::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(200, |s| s.parse().expect("node count"));
    let p: f64 = args.get(1).map_or(0.05, |s| s.parse().expect("edge probability"));
    let seed: u64 = args.get(2).map_or(1, |s| s.parse().expect("seed"));

    let source = erdos_renyi(n, p, seed)?;
    let (target, perm) = shuffle_nodes(&source, seed + 1000)?;
    let truth = perm.iter().enumerate().map(|(i, &t)| (i, t)).collect();
    let problem = AlignmentProblem::new(source, target, truth, Vec::new())?;

    let cfg = RunConfig::default();
    let start = Instant::now();
    let result = pipeline::run(&problem, &cfg)?;
    let report = result.report.expect("ground truth present");
    println!(
        "n={n} p={p} seed={seed}: {} edges, augmented dim {}",
        problem.source.edge_count(),
        result.embedding.augmented_attributes.as_ref().map_or(0, |a| a.dim())
    );
    println!(
        "training loss {:.4} -> {:.4}",
        result.embedding.augmented_training.initial_loss(),
        result.embedding.augmented_training.best_loss()
    );
    for t in &result.outcome.trace {
        println!(
            "iteration {:>2}: committed {:>4}, similarity {:.4} .. {:.4}",
            t.iteration, t.committed, t.min_similarity, t.max_similarity
        );
    }
    println!("{}", report.to_json());
    println!("elapsed {:.2?}", start.elapsed());
    Ok(())
}
