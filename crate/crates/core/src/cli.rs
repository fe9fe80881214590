//! Command-line front end: `align`, `perturb`, `eval`, `bench`, `gradcheck`.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bench::run_bench;
use crate::config::RunConfig;
use crate::encoder::{gradient_check, theorem_bound_check, TrainConfig};
use crate::error::Result;
use crate::graph::{AlignmentProblem, Mapping};
use crate::io::{self, NodeIds};
use crate::metrics::EvalReport;
use crate::pipeline;
use crate::synth::{derive_seed, perturb, sample_anchors, shuffle_nodes, PerturbConfig};

#[derive(Debug, Parser)]
#[command(name = "netalign", version, about = "Gradual network alignment with centrality-augmented attributes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Align two networks and write the node mapping.
    Align {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        source_attrs: Option<PathBuf>,
        #[arg(long)]
        target_attrs: Option<PathBuf>,
        /// Ground-truth TSV; enables metrics and anchor sampling.
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Mapping TSV output; stdout when absent.
        #[arg(long)]
        mapping_out: Option<PathBuf>,
        #[arg(long)]
        metrics_out: Option<PathBuf>,
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[arg(long)]
        similarity_out: Option<PathBuf>,
    },
    /// Write a noisy, id-shuffled copy of a network and its ground truth.
    Perturb {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        ground_truth_out: PathBuf,
        #[arg(long)]
        attrs: Option<PathBuf>,
        #[arg(long)]
        attrs_out: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1)]
        edge_removal_rate: f64,
        #[arg(long, default_value_t = 0.1)]
        attr_flip_rate: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep target ids equal to source ids.
        #[arg(long)]
        no_shuffle: bool,
    },
    /// Score a mapping TSV against a ground-truth TSV.
    Eval {
        #[arg(long)]
        mapping: PathBuf,
        #[arg(long)]
        ground_truth: PathBuf,
        /// Seed anchors to exclude from the score.
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// Run the synthetic protocol over several seeds.
    Bench {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides `bench.seeds`.
        #[arg(long)]
        seeds: Option<usize>,
        /// Results JSON; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Verify encoder gradients and the embedding-distance bound.
    Gradcheck {
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 200)]
        bound_trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig> {
    path.map_or_else(|| Ok(RunConfig::default()), RunConfig::load)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => io::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Align {
            source,
            target,
            source_attrs,
            target_attrs,
            ground_truth,
            config,
            mapping_out,
            metrics_out,
            trace_out,
            similarity_out,
        } => {
            let cfg = load_config(config.as_deref())?;
            let src = io::load_edge_list(&source)?;
            let tgt = io::load_edge_list(&target)?;
            let mut g_s = src.graph;
            let mut g_t = tgt.graph;
            if let Some(p) = &source_attrs {
                let x = io::load_attributes(p, g_s.node_count())?;
                g_s = g_s.with_attributes(Some(x))?;
            }
            if let Some(p) = &target_attrs {
                let x = io::load_attributes(p, g_t.node_count())?;
                g_t = g_t.with_attributes(Some(x))?;
            }
            let problem = match &ground_truth {
                Some(p) => {
                    let truth = io::load_pairs(p, &src.ids, &tgt.ids)?;
                    let seeds = sample_anchors(&truth, cfg.anchor_fraction, derive_seed(cfg.matching.rng_seed, 1))?;
                    AlignmentProblem::new(g_s, g_t, truth, seeds)?
                }
                None => AlignmentProblem::unlabeled(g_s, g_t),
            };
            let result = pipeline::run(&problem, &cfg)?;
            emit(
                mapping_out.as_deref(),
                &io::format_pairs(&result.outcome.mapping.sorted_pairs(), &src.ids, &tgt.ids),
            )?;
            if let Some(p) = &trace_out {
                io::write(p, &io::format_trace(&result.outcome.trace))?;
            }
            if let Some(p) = &similarity_out {
                io::write_similarity(p, &result.outcome.final_similarity)?;
            }
            if let Some(report) = &result.report {
                let json = report.to_json() + "\n";
                match &metrics_out {
                    Some(p) => io::write(p, &json)?,
                    None => eprint!("{json}"),
                }
            }
            Ok(0)
        }
        Command::Perturb {
            input,
            output,
            ground_truth_out,
            attrs,
            attrs_out,
            edge_removal_rate,
            attr_flip_rate,
            seed,
            no_shuffle,
        } => {
            let loaded = io::load_edge_list(&input)?;
            let mut g = loaded.graph;
            if let Some(p) = &attrs {
                let x = io::load_attributes(p, g.node_count())?;
                g = g.with_attributes(Some(x))?;
            }
            let cfg = PerturbConfig {
                edge_removal_rate,
                attr_flip_rate,
                rng_seed: seed,
            };
            let (noisy, _) = perturb(&g, &cfg)?;
            let (noisy, perm) = if no_shuffle {
                let n = noisy.node_count();
                (noisy, (0..n).collect())
            } else {
                shuffle_nodes(&noisy, derive_seed(seed, 1))?
            };
            // target node perm[i] keeps the external name of source node i when unshuffled
            let target_ids = if no_shuffle {
                loaded.ids.clone()
            } else {
                NodeIds::numeric(noisy.node_count())
            };
            io::write_edge_list(&output, &noisy, &target_ids)?;
            let truth: Vec<_> = perm.iter().enumerate().map(|(i, &p)| (i, p)).collect();
            io::write_pairs(&ground_truth_out, &truth, &loaded.ids, &target_ids)?;
            if let (Some(out), Some(x)) = (&attrs_out, noisy.attributes()) {
                io::write_attributes(out, x)?;
            }
            Ok(0)
        }
        Command::Eval {
            mapping,
            ground_truth,
            seeds,
        } => {
            let mut src = NodeIds::default();
            let mut tgt = NodeIds::default();
            let mut resolve = |pairs: Vec<(String, String)>| -> Vec<(usize, usize)> {
                pairs
                    .into_iter()
                    .map(|(s, t)| (src.intern(&s), tgt.intern(&t)))
                    .collect()
            };
            let truth = resolve(io::load_name_pairs(&ground_truth)?);
            let predicted = resolve(io::load_name_pairs(&mapping)?);
            let seeds = match &seeds {
                Some(p) => resolve(io::load_name_pairs(p)?),
                None => Vec::new(),
            };
            let mapping = Mapping::from_pairs(predicted)?;
            let report = EvalReport::compute(&mapping, None, &truth, &seeds, &[])?;
            println!("{}", report.to_json());
            Ok(0)
        }
        Command::Bench {
            config,
            seeds,
            out,
            table,
        } => {
            let mut cfg = load_config(config.as_deref())?;
            if let Some(k) = seeds {
                cfg.bench.seeds = k;
            }
            let report = run_bench(&cfg)?;
            emit(out.as_deref(), &report.to_json())?;
            match &table {
                Some(p) => io::write(p, &report.to_table())?,
                None => eprint!("{}", report.to_table()),
            }
            Ok(0)
        }
        Command::Gradcheck {
            trials,
            bound_trials,
            seed,
        } => {
            let cfg = TrainConfig {
                hidden_dim: 6,
                ..Default::default()
            };
            let mut ok = true;
            let mut worst = 0.0f64;
            for t in 0..trials {
                worst = worst.max(gradient_check(&cfg, seed.wrapping_add(t)));
            }
            let grad_ok = worst <= 1e-4;
            ok &= grad_ok;
            println!(
                "gradient check: {trials} trials, max relative error {worst:.3e} [{}]",
                if grad_ok { "ok" } else { "FAIL" }
            );
            for eps in [0.0, 0.01, 0.1, 1.0] {
                let r = theorem_bound_check(eps, bound_trials, seed);
                ok &= r.passed();
                println!(
                    "bound check eps={eps}: {}/{} trials, max ratio {:.4} [{}]",
                    r.passed_trials,
                    r.trials,
                    r.max_ratio,
                    if r.passed() { "ok" } else { "FAIL" }
                );
                if let Some(v) = &r.first_violation {
                    println!("  first violation: {v:?}");
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}
