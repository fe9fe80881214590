//! Runs the synthetic protocol with and without centrality augmentation and
//! prints both result tables.
//!
//! ```bash
//! cargo run --release -p netalign --example synthetic_bench [config]
//! ```

use netalign::bench::run_bench;
use netalign::RunConfig;

fn main() -> netalign::Result<()> {
    let cfg = match std::env::args().nth(1) {
        Some(path) => RunConfig::load(path.as_ref())?,
        None => include_str!("configs/synthetic.conf").parse()?,
    };
    let mut ones = cfg.clone();
    ones.augmentation_enabled = false;

    println!("with augmentation\n{}", run_bench(&cfg)?.to_table());
    println!("all-ones attributes\n{}", run_bench(&ones)?.to_table());
    Ok(())
}
