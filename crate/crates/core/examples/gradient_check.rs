//! Compares the encoder's analytic gradients with central finite differences
//! on random small problems.
//!
//! ```bash
//! cargo run --release -p netalign --example gradient_check
//! ```

use netalign::encoder::{gradient_check, gradient_check_with, Activation};
use netalign::TrainConfig;

fn main() {
    for layers in 1..=3 {
        let cfg = TrainConfig {
            num_layers: layers,
            hidden_dim: 6,
            ..Default::default()
        };
        let relu = (0..20).map(|s| gradient_check(&cfg, s)).fold(0.0, f64::max);
        let linear = (0..20)
            .map(|s| gradient_check_with(&cfg, s, Activation::Identity))
            .fold(0.0, f64::max);
        println!("{layers} layer(s): max relative error relu {relu:.2e}, identity {linear:.2e}");
    }
}
