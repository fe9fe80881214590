//! Checks that for a ground-truth pair whose neighbors are all aligned, the
//! one-layer pre-activation embedding distance stays within
//! `sigma_max(W) * epsilon` when attribute differences are at most epsilon.
//!
//! ```bash
//! cargo run --release -p netalign --example embedding_bound
//! ```

use netalign::encoder::theorem_bound_check;

fn main() {
    for eps in [0.0, 0.01, 0.1, 1.0, 10.0] {
        let r = theorem_bound_check(eps, 200, 7);
        println!(
            "eps {eps:>5}: {}/{} trials within the bound, tightest ratio {:.3}",
            r.passed_trials, r.trials, r.max_ratio
        );
        if let Some(v) = r.first_violation {
            println!("  first violation: {v:?}");
        }
    }
}
