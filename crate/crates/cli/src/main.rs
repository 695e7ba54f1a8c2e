use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fedmycd::consensus::aggregate;
use fedmycd::federation::{generate_evidence, EvidenceGraph, ModelSpec, Validation};
use fedmycd::graph::{signed_edge_expansion_with, ExpansionOptions, SignedWeightedGraph};
use fedmycd::recovery::{dual_certificate, recover, SdpOptions};
use fedmycd::theory::{impossibility_condition, recovery_condition_with};
use fedmycd_cli::experiments::{
    self, perturb_study, run_pipeline, run_sweep, sweep_csv, SweepConfig,
};
use fedmycd_cli::topologies;

/// Federated myopic community detection: generate censored client evidence,
/// aggregate it into a signed weighted consensus graph, recover communities
/// via a semidefinite relaxation with a dual certificate, and evaluate the
/// recovery and impossibility conditions.
#[derive(Parser)]
#[command(name = "fedmycd", version, about)]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the sweep pool (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample every client's censored evidence graph from a model file.
    Generate {
        /// Model spec JSON file.
        #[arg(long)]
        model: PathBuf,
    },
    /// Fold evidence graphs into the signed weighted consensus graph.
    Aggregate {
        /// Evidence JSON file (array of per-client reports).
        #[arg(long)]
        evidence: PathBuf,
        /// Node count of the full network.
        #[arg(long)]
        n: usize,
    },
    /// Solve the SDP relaxation on a consensus graph and certify the
    /// rounded labels.
    Solve {
        /// Edge-list text file.
        #[arg(long)]
        graph: PathBuf,
        /// Factor rank (defaults to ceil(sqrt(2n)) + 1).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Run generate, aggregate, solve, round, certify, and the exact
    /// recovery check end to end.
    Pipeline {
        #[arg(long)]
        model: PathBuf,
    },
    /// Exhaustive signed weighted edge expansion of a graph.
    Expansion {
        #[arg(long)]
        graph: PathBuf,
        /// Enumeration cap (2^n subsets are scanned).
        #[arg(long, default_value_t = fedmycd::graph::DEFAULT_ENUMERATION_CAP)]
        max_nodes: usize,
    },
    /// Dual certificate of a candidate labeling on a consensus graph.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        /// JSON file: either a bare array of +1/-1 or {"labels": [...]}.
        #[arg(long)]
        labels: PathBuf,
    },
    /// Evaluate the exact-recovery sufficient condition of a model.
    CheckRecovery {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = fedmycd::graph::DEFAULT_ENUMERATION_CAP)]
        max_nodes: usize,
    },
    /// Evaluate the single-client impossibility bound.
    CheckImpossibility {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long)]
        r: f64,
        /// Non-isolated node count of the client's subgraph.
        #[arg(long)]
        n_k: usize,
        /// Number of viewable pairs in the client's field of view.
        #[arg(long)]
        fov_size: usize,
    },
    /// Success-count grid over field-of-view sizes and client counts.
    Sweep {
        /// Sweep config JSON; flags below override nothing when present.
        #[arg(long, conflicts_with_all = ["n", "p", "q", "r", "fov_sizes", "client_counts", "trials"])]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0.9)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        q: f64,
        #[arg(long, default_value_t = 0.1)]
        r: f64,
        /// Comma-separated field-of-view sizes (M).
        #[arg(long, value_delimiter = ',', default_values_t = [5usize, 10, 15, 20, 25, 30])]
        fov_sizes: Vec<usize>,
        /// Comma-separated client counts (K).
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 5, 10, 15, 20])]
        client_counts: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        trials: usize,
    },
    /// Signed weighted edge expansion and PSD flag as one edge's weight is
    /// perturbed.
    PerturbStudy {
        /// complete | petersen | spider33 | path to an edge-list file.
        #[arg(long)]
        topology: String,
        /// Perturbed edge as "i,j" (defaults to the topology's designated
        /// edge).
        #[arg(long)]
        edge: Option<String>,
        /// Comma-separated weights for the perturbed edge.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 0.5, 0.0, -0.5, -1.0])]
        weights: Vec<f64>,
    },
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("building worker pool")?
            .install(|| run(&cli)),
        None => run(&cli),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let output = match &cli.command {
        Command::Generate { model } => {
            let model = load_model(model)?;
            let evidence: Vec<EvidenceGraph> = generate_evidence(&model, cli.seed)?
                .into_iter()
                .map(|(_, e)| e)
                .collect();
            to_json(&evidence)?
        }
        Command::Aggregate { evidence, n } => {
            let text = read(evidence)?;
            let evidence: Vec<EvidenceGraph> = serde_json::from_str(&text)
                .with_context(|| format!("parsing evidence file {}", evidence.display()))?;
            let consensus = aggregate(&evidence, *n)?;
            consensus.graph.to_edge_list()
        }
        Command::Solve {
            graph,
            rank,
            max_iter,
            tol,
        } => {
            let g = load_graph(graph)?;
            let opts = SdpOptions {
                rank: *rank,
                max_sweeps: *max_iter,
                tol: *tol,
                seed: cli.seed,
            };
            let (result, _) = recover(&g, &opts)?;
            to_json(&result)?
        }
        Command::Pipeline { model } => {
            let model = load_model(model)?;
            let report = run_pipeline(&model, cli.seed)?;
            to_json(&report)?
        }
        Command::Expansion { graph, max_nodes } => {
            let g = load_graph(graph)?;
            let report = signed_edge_expansion_with(
                &g,
                &ExpansionOptions {
                    max_nodes: *max_nodes,
                },
            )?;
            to_json(&report)?
        }
        Command::Certify { graph, labels } => {
            let g = load_graph(graph)?;
            let labels = load_labels(labels)?;
            let cert = dual_certificate(&g, &labels)?;
            to_json(&cert)?
        }
        Command::CheckRecovery { model, max_nodes } => {
            let model = load_model(model)?.resolve(cli.seed)?;
            let report = recovery_condition_with(
                &model,
                &ExpansionOptions {
                    max_nodes: *max_nodes,
                },
            )?;
            to_json(&report)?
        }
        Command::CheckImpossibility {
            p,
            q,
            r,
            n_k,
            fov_size,
        } => {
            let report = impossibility_condition_from_flags(*p, *q, *r, *n_k, *fov_size)?;
            to_json(&report)?
        }
        Command::Sweep {
            config,
            n,
            p,
            q,
            r,
            fov_sizes,
            client_counts,
            trials,
        } => {
            let cfg = match config {
                Some(path) => {
                    let text = read(path)?;
                    let mut cfg: SweepConfig = serde_json::from_str(&text)
                        .with_context(|| format!("parsing sweep config {}", path.display()))?;
                    cfg.master_seed = cli.seed;
                    cfg
                }
                None => SweepConfig {
                    n: *n,
                    p: *p,
                    q: *q,
                    r: *r,
                    fov_sizes: fov_sizes.clone(),
                    client_counts: client_counts.clone(),
                    trials: *trials,
                    master_seed: cli.seed,
                },
            };
            let cells = run_sweep(&cfg)?;
            sweep_csv(&cells)
        }
        Command::PerturbStudy {
            topology,
            edge,
            weights,
        } => {
            let (graph, default_edge) = load_topology(topology)?;
            let edge = match edge {
                Some(text) => parse_edge(text)?,
                None => default_edge,
            };
            let rows = perturb_study(&graph, edge, weights)?;
            experiments::perturb_csv(&rows)
        }
    };

    match &cli.out {
        Some(path) => fs::write(path, &output)
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => print!("{output}"),
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

fn load_model(path: &Path) -> Result<ModelSpec> {
    let text = read(path)?;
    let model: ModelSpec = serde_json::from_str(&text)
        .with_context(|| format!("parsing model spec {}", path.display()))?;
    model.validate(Validation::Strict)?;
    Ok(model)
}

fn load_graph(path: &Path) -> Result<SignedWeightedGraph> {
    let text = read(path)?;
    SignedWeightedGraph::parse_edge_list(&text)
        .with_context(|| format!("parsing edge list {}", path.display()))
}

fn load_labels(path: &Path) -> Result<Vec<i8>> {
    let text = read(path)?;
    if let Ok(labels) = serde_json::from_str::<Vec<i8>>(&text) {
        return Ok(labels);
    }
    #[derive(serde::Deserialize)]
    struct Wrapper {
        labels: Vec<i8>,
    }
    let wrapper: Wrapper = serde_json::from_str(&text).with_context(|| {
        format!(
            "parsing labels file {} (expected [1,-1,...] or {{\"labels\": [...]}})",
            path.display()
        )
    })?;
    Ok(wrapper.labels)
}

fn load_topology(name: &str) -> Result<(SignedWeightedGraph, (usize, usize))> {
    if let Some(built) = topologies::builtin(name) {
        return Ok(built);
    }
    let path = Path::new(name);
    if !path.exists() {
        bail!("unknown topology '{name}' (expected complete, petersen, spider33, or a file path)");
    }
    let text = read(path)?;
    Ok(topologies::from_edge_list(&text)?)
}

fn parse_edge(text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        bail!("edge must be 'i,j', got '{text}'");
    }
    let i = parts[0].trim().parse().context("parsing edge endpoint")?;
    let j = parts[1].trim().parse().context("parsing edge endpoint")?;
    Ok((i, j))
}

fn impossibility_condition_from_flags(
    p: f64,
    q: f64,
    r: f64,
    n_k: usize,
    fov_size: usize,
) -> Result<fedmycd::theory::ImpossibilityReport> {
    use fedmycd::federation::{ClientSpec, CompleteSampleSpec, FieldOfView};
    // The bound depends on the field of view only through its size; a
    // placeholder pair set of the right cardinality carries it.
    let mut pairs = std::collections::BTreeSet::new();
    let mut count = 0;
    'outer: for i in 0.. {
        for j in 0..i {
            if count == fov_size {
                break 'outer;
            }
            pairs.insert((j, i));
            count += 1;
        }
    }
    let spec = ClientSpec {
        fov: if fov_size == 0 {
            FieldOfView::CompleteSample {
                complete_sample: CompleteSampleSpec { m: 0 },
            }
        } else {
            FieldOfView::Pairs(pairs)
        },
        p,
        q,
        r,
    };
    Ok(impossibility_condition(&spec, n_k)?)
}
