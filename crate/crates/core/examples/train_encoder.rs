//! Trains the shared encoder on a graph pair, prints the loss curve, and
//! round-trips the parameters through a JSON checkpoint.
//!
//! ```bash
//! cargo run --release -p netalign --example train_encoder
//! ```

use netalign::synth::{erdos_renyi, shuffle_nodes};
use netalign::{augment, train, AlignmentProblem, AugmentConfig, EncoderParams, TrainConfig};

fn main() -> netalign::Result<()> {
    let source = erdos_renyi(100, 0.08, 2)?;
    let (target, _) = shuffle_nodes(&source, 3)?;
    let problem = AlignmentProblem::unlabeled(source, target);
    let aug = augment(&problem, &AugmentConfig::default())?;

    let cfg = TrainConfig {
        epochs: 100,
        ..Default::default()
    };
    let out = train(&problem.source, &problem.target, &aug.source, &aug.target, &cfg)?;
    for (epoch, loss) in out.losses.iter().enumerate().step_by(10) {
        println!("epoch {epoch:>3}: loss {loss:.5}");
    }
    println!("best {:.5} of initial {:.5}", out.best_loss(), out.initial_loss());

    let dir = std::env::temp_dir().join("netalign-example");
    std::fs::create_dir_all(&dir).map_err(|e| netalign::AlignError::Io {
        path: dir.clone(),
        source: e,
    })?;
    let path = dir.join("encoder.json");
    out.params.save(&path)?;
    let back = EncoderParams::load(&path)?;
    println!(
        "checkpoint {}: {} parameters, identical after reload: {}",
        path.display(),
        back.parameter_count(),
        back == out.params
    );
    Ok(())
}
