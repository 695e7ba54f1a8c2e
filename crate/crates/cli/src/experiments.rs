//! End-to-end pipeline, sweep grid, and perturbation study.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use fedmycd::consensus::aggregate;
use fedmycd::federation::{
    generate_evidence, ClientSpec, CompleteSampleSpec, FieldOfView, ModelSpec,
};
use fedmycd::graph::{signed_edge_expansion_with, ExpansionOptions, SignedWeightedGraph};
use fedmycd::recovery::{exact_recovery_check, recover, RecoveryResult, SdpOptions};
use fedmycd::spectral::{eig_sym, lambda_one_perp};
use fedmycd::Result;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mix a master seed with context parts (cell coordinates, trial index),
/// so every unit of work owns an independent, reproducible stream that does
/// not depend on scheduling order.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    let mut state = splitmix64(master ^ 0x6665_646D_7963_6400);
    for &part in parts {
        state = splitmix64(state ^ splitmix64(part));
    }
    state
}

const SOLVER_LANE: u64 = 0x5344_5053;

/// Full JSON report of one end-to-end run.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub seed: u64,
    pub n: usize,
    pub clients: usize,
    pub result: RecoveryResult,
    pub converged: bool,
    pub sweeps: usize,
    pub exact_recovery: bool,
}

/// Generate evidence, aggregate, solve, round, certify, and compare with
/// the ground truth. Deterministic in `(model, seed)`.
pub fn run_pipeline(model: &ModelSpec, seed: u64) -> Result<PipelineReport> {
    let evidence: Vec<_> = generate_evidence(model, seed)?
        .into_iter()
        .map(|(_, e)| e)
        .collect();
    let consensus = aggregate(&evidence, model.n)?;
    let opts = SdpOptions {
        seed: derive_seed(seed, &[SOLVER_LANE]),
        ..SdpOptions::default()
    };
    let (result, sol) = recover(&consensus.graph, &opts)?;
    let exact = exact_recovery_check(&result.labels, &model.labels)?;
    Ok(PipelineReport {
        seed,
        n: model.n,
        clients: model.clients.len(),
        result,
        converged: sol.converged,
        sweeps: sol.sweeps,
        exact_recovery: exact,
    })
}

/// Grid configuration for the (fov size, client count) sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SweepConfig {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub fov_sizes: Vec<usize>,
    pub client_counts: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            n: 30,
            p: 0.9,
            q: 0.1,
            r: 0.1,
            fov_sizes: vec![5, 10, 15, 20, 25, 30],
            client_counts: vec![1, 5, 10, 15, 20],
            trials: 10,
            master_seed: 0,
        }
    }
}

/// One grid cell's outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SweepCell {
    pub m: usize,
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    pub certified: usize,
    pub mean_runtime_ms: f64,
}

/// The model a sweep cell runs: balanced halves as ground truth and `k`
/// clients each viewing a fresh uniformly sampled complete subgraph on `m`
/// nodes.
pub fn sweep_cell_model(cfg: &SweepConfig, m: usize, k: usize) -> ModelSpec {
    let labels = (0..cfg.n)
        .map(|i| if i < cfg.n / 2 { 1 } else { -1 })
        .collect();
    let clients = (0..k)
        .map(|_| ClientSpec {
            fov: FieldOfView::CompleteSample {
                complete_sample: CompleteSampleSpec { m },
            },
            p: cfg.p,
            q: cfg.q,
            r: cfg.r,
        })
        .collect();
    ModelSpec {
        n: cfg.n,
        labels,
        clients,
    }
}

/// Run every (M, K) cell for the configured number of trials. Cells execute
/// in a work pool; each trial's seed comes from `(master_seed, M, K, trial)`
/// alone, so counts are identical no matter how many workers run. Rows come
/// back in grid order (fov sizes outer, client counts inner).
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepCell>> {
    if cfg.trials == 0 {
        return Err(fedmycd::Error::InvalidInput("trials must be >= 1".into()));
    }
    let cells: Vec<(usize, usize)> = cfg
        .fov_sizes
        .iter()
        .flat_map(|&m| cfg.client_counts.iter().map(move |&k| (m, k)))
        .collect();
    cells
        .par_iter()
        .map(|&(m, k)| {
            let model = sweep_cell_model(cfg, m, k);
            let mut successes = 0;
            let mut certified = 0;
            let mut runtime_ms = 0.0;
            for trial in 0..cfg.trials {
                let seed = derive_seed(cfg.master_seed, &[m as u64, k as u64, trial as u64]);
                let start = Instant::now();
                let report = run_pipeline(&model, seed)?;
                runtime_ms += start.elapsed().as_secs_f64() * 1e3;
                if report.exact_recovery {
                    successes += 1;
                }
                if report.result.certified {
                    certified += 1;
                }
            }
            Ok(SweepCell {
                m,
                k,
                trials: cfg.trials,
                successes,
                certified,
                mean_runtime_ms: runtime_ms / cfg.trials as f64,
            })
        })
        .collect()
}

/// Render sweep cells as CSV with the fixed column order.
pub fn sweep_csv(cells: &[SweepCell]) -> String {
    let mut out = String::from("M,K,trials,successes,certified,mean_runtime_ms\n");
    for cell in cells {
        out.push_str(&format!(
            "{},{},{},{},{},{:.3}\n",
            cell.m, cell.k, cell.trials, cell.successes, cell.certified, cell.mean_runtime_ms
        ));
    }
    out
}

/// One row of the perturbation study.
#[derive(Debug, Clone, Serialize)]
pub struct PerturbRow {
    pub weight: f64,
    pub phi_g: f64,
    /// Whether the graph Laplacian stayed positive semidefinite
    /// (`lambda_min >= -1e-9`).
    pub psd: bool,
    pub lambda_min: f64,
    pub lambda_one_perp: f64,
}

/// Set the designated edge to each weight in turn and report the signed
/// weighted edge expansion plus the PSD flag of the Laplacian.
pub fn perturb_study(
    base: &SignedWeightedGraph,
    edge: (usize, usize),
    weights: &[f64],
) -> Result<Vec<PerturbRow>> {
    let opts = ExpansionOptions::default();
    weights
        .iter()
        .map(|&weight| {
            let mut g = base.clone();
            g.set_weight(edge.0, edge.1, weight)?;
            let phi_g = signed_edge_expansion_with(&g, &opts)?.phi_g;
            let lap = g.laplacian();
            let lambda_min = eig_sym(&lap)?.values[0];
            Ok(PerturbRow {
                weight,
                phi_g,
                psd: lambda_min >= -1e-9,
                lambda_min,
                lambda_one_perp: lambda_one_perp(&lap)?,
            })
        })
        .collect()
}

/// Render perturbation rows as CSV.
pub fn perturb_csv(rows: &[PerturbRow]) -> String {
    let mut out = String::from("weight,phi_g,psd,lambda_min,lambda_one_perp\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.weight, row.phi_g, row.psd, row.lambda_min, row.lambda_one_perp
        ));
    }
    out
}
