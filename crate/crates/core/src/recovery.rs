//! Recovery of the community labels from a consensus graph: a low-rank
//! factored coordinate-ascent solver for the diagonal-constrained SDP
//! `max <W, Y> s.t. Y_ii = 1, Y >= 0`, eigenvector rounding, the dual
//! certificate of optimality and uniqueness, a brute-force oracle, and the
//! greedy sign-propagation recoverer for all-good-edge graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::SignedWeightedGraph;
use crate::spectral::{self, SymMatrix};

/// Certification threshold on the second-smallest eigenvalue of the dual
/// matrix. Below it the result is reported uncertified rather than failed,
/// since strict positivity is what the uniqueness argument needs and a
/// numerical zero is ambiguous.
pub const CERTIFICATION_TOL: f64 = 1e-8;

/// Knobs for the factored SDP solver.
#[derive(Debug, Clone, Copy)]
pub struct SdpOptions {
    /// Factor rank; defaults to `ceil(sqrt(2n)) + 1`, above the bound that
    /// guarantees the factored problem can represent an SDP optimum.
    pub rank: Option<usize>,
    pub max_sweeps: usize,
    /// Converged when a full sweep improves the objective by less than
    /// `tol * max(1, |objective|)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            rank: None,
            max_sweeps: 1000,
            tol: 1e-9,
            seed: 0,
        }
    }
}

fn default_rank(n: usize) -> usize {
    ((2.0 * n as f64).sqrt().ceil() as usize) + 1
}

/// A factored feasible point `Y = V V'` with unit-norm rows.
#[derive(Debug, Clone)]
pub struct SdpSolution {
    n: usize,
    rank: usize,
    factor: Vec<f64>,
    pub objective: f64,
    pub sweeps: usize,
    pub converged: bool,
    /// Objective after each sweep; nondecreasing by construction.
    pub objective_trace: Vec<f64>,
}

impl SdpSolution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factor_row(&self, i: usize) -> &[f64] {
        &self.factor[i * self.rank..(i + 1) * self.rank]
    }

    /// The Gram matrix `Y = V V'`.
    pub fn gram(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| {
            self.factor_row(i)
                .iter()
                .zip(self.factor_row(j))
                .map(|(a, b)| a * b)
                .sum()
        })
    }
}

fn unit_sphere_row(rank: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // Box-Muller normals, normalized; rejects the (measure-zero) tiny-norm
    // draw by resampling.
    loop {
        let mut v = Vec::with_capacity(rank);
        while v.len() < rank {
            let u1: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let u2: f64 = rng.random();
            let radius = (-2.0 * u1.ln()).sqrt();
            let angle = 2.0 * std::f64::consts::PI * u2;
            v.push(radius * angle.cos());
            if v.len() < rank {
                v.push(radius * angle.sin());
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            for x in &mut v {
                *x /= norm;
            }
            return v;
        }
    }
}

/// Solve `max <W, V V'>` over unit-row factors by cyclic coordinate ascent:
/// row `i` moves to the normalized weighted sum of the other rows, which is
/// the exact per-row maximizer, so the objective never decreases. Rows with
/// a vanishing gradient keep their previous value.
pub fn solve_sdp(w: &SignedWeightedGraph, opts: &SdpOptions) -> Result<SdpSolution> {
    let n = w.node_count();
    if n == 0 {
        return Err(Error::invalid("cannot solve the SDP on an empty graph"));
    }
    let rank = opts.rank.unwrap_or_else(|| default_rank(n));
    if rank < 2 {
        return Err(Error::invalid(format!(
            "factor rank must be >= 2, got {rank}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut factor = Vec::with_capacity(n * rank);
    for _ in 0..n {
        factor.extend(unit_sphere_row(rank, &mut rng));
    }

    let objective_of = |factor: &[f64]| -> f64 {
        let mut obj = 0.0;
        for (i, j, wij) in w.edges() {
            let dot: f64 = factor[i * rank..(i + 1) * rank]
                .iter()
                .zip(&factor[j * rank..(j + 1) * rank])
                .map(|(a, b)| a * b)
                .sum();
            obj += 2.0 * wij * dot;
        }
        obj
    };

    let mut objective = objective_of(&factor);
    let mut trace = Vec::new();
    let mut converged = false;
    let mut sweeps = 0;
    let mut gradient = vec![0.0; rank];

    for _ in 0..opts.max_sweeps {
        sweeps += 1;
        for i in 0..n {
            gradient.iter_mut().for_each(|g| *g = 0.0);
            for j in 0..n {
                let wij = w.weight(i, j);
                if wij == 0.0 {
                    continue;
                }
                let row_j = &factor[j * rank..(j + 1) * rank];
                for (g, &vj) in gradient.iter_mut().zip(row_j) {
                    *g += wij * vj;
                }
            }
            let norm = gradient.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-12 {
                continue;
            }
            let row_i = &mut factor[i * rank..(i + 1) * rank];
            for (v, &g) in row_i.iter_mut().zip(&gradient) {
                *v = g / norm;
            }
        }
        let new_objective = objective_of(&factor);
        trace.push(new_objective);
        let gain = new_objective - objective;
        objective = new_objective;
        if gain < opts.tol * objective.abs().max(1.0) {
            converged = true;
            break;
        }
    }

    Ok(SdpSolution {
        n,
        rank,
        factor,
        objective,
        sweeps,
        converged,
        objective_trace: trace,
    })
}

/// Round a factored solution to labels: the sign pattern of the dominant
/// eigenvector of `V V'`, with zero entries broken to +1.
pub fn round_solution(sol: &SdpSolution) -> Result<Vec<i8>> {
    let gram = sol.gram();
    let eig = spectral::eig_sym(&gram)?;
    let top = &eig.vectors[sol.n - 1];
    Ok(top.iter().map(|&x| if x < 0.0 { -1 } else { 1 }).collect())
}

/// The dual certificate for a candidate labeling.
#[derive(Debug, Clone, Serialize)]
pub struct DualCertificate {
    pub lambda2: f64,
    pub certified: bool,
    /// `max_i |(Lambda - W) y|_i`; structurally zero because `y` is always
    /// an eigenvector of the dual matrix with eigenvalue 0.
    pub eigenvector_residual: f64,
}

/// Build the dual matrix `Lambda - W` with
/// `Lambda_ii = sum_{j != i} W_ij y_i y_j` and report its second-smallest
/// eigenvalue. Strict positivity certifies that `y y'` is the unique SDP
/// optimum.
pub fn dual_certificate(w: &SignedWeightedGraph, labels: &[i8]) -> Result<DualCertificate> {
    let n = w.node_count();
    check_labels(labels, n)?;
    let mut dual = SymMatrix::from_fn(n, |i, j| if i == j { 0.0 } else { -w.weight(i, j) });
    for i in 0..n {
        let lam: f64 = (0..n)
            .map(|j| w.weight(i, j) * labels[i] as f64 * labels[j] as f64)
            .sum();
        dual.set(i, i, lam);
    }
    let y: Vec<f64> = labels.iter().map(|&l| l as f64).collect();
    let residual = dual
        .mul_vec(&y)
        .iter()
        .fold(0.0f64, |acc, x| acc.max(x.abs()));
    let lambda2 = spectral::lambda2(&dual)?;
    Ok(DualCertificate {
        lambda2,
        certified: lambda2 > CERTIFICATION_TOL,
        eigenvector_residual: residual,
    })
}

/// Exhaustive maximizer of `y' W y` over label vectors, with `y_0 = +1`
/// fixed (global sign symmetry) and ties broken toward the
/// lexicographically first vector (+1 before -1, earlier nodes first).
pub fn brute_force_opt(w: &SignedWeightedGraph) -> Result<(Vec<i8>, f64)> {
    let n = w.node_count();
    if n == 0 {
        return Err(Error::invalid("empty graph"));
    }
    if n > 16 {
        return Err(Error::capacity(format!(
            "brute force enumerates 2^{} label vectors; n = {n} exceeds the cap of 16",
            n - 1
        )));
    }
    let edges: Vec<(usize, usize, f64)> = w.edges().collect();
    let free = n - 1;
    let mut best_value = f64::NEG_INFINITY;
    let mut best_labels = vec![1i8; n];
    let mut labels = vec![1i8; n];
    for mask in 0u32..(1u32 << free) {
        // Bit (n - 1 - i) drives node i, so ascending masks enumerate label
        // vectors in lexicographic order with +1 sorting before -1.
        for i in 1..n {
            let bit = (mask >> (n - 1 - i)) & 1;
            labels[i] = if bit == 0 { 1 } else { -1 };
        }
        let mut value = 0.0;
        for &(i, j, wij) in &edges {
            value += 2.0 * wij * (labels[i] * labels[j]) as f64;
        }
        if value > best_value {
            best_value = value;
            best_labels.copy_from_slice(&labels);
        }
    }
    Ok((best_labels, best_value))
}

/// Outcome of greedy sign propagation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GreedyOutcome {
    Labels(Vec<i8>),
    /// Some already-labeled node received a conflicting assignment across
    /// this edge; recovery by propagation is impossible.
    Inconsistent {
        i: usize,
        j: usize,
    },
}

/// Breadth-first sign propagation from node 0: a positive edge pulls the
/// neighbor into the same community, a negative edge into the other one.
/// Exact on any connected graph whose signs are globally consistent.
pub fn greedy_recover(w: &SignedWeightedGraph) -> Result<GreedyOutcome> {
    let n = w.node_count();
    if n == 0 {
        return Err(Error::invalid("empty graph"));
    }

    // The support (nonzero edges) must be connected for propagation to reach
    // every node.
    let mut component = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        component[start] = next;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if w.weight(u, v) != 0.0 && component[v] == usize::MAX {
                    component[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    if next > 1 {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); next];
        for (node, &c) in component.iter().enumerate() {
            groups[c].push(node);
        }
        return Err(Error::invalid(format!(
            "support is disconnected; components: {groups:?}"
        )));
    }

    let mut labels = vec![0i8; n];
    labels[0] = 1;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for v in 0..n {
            let wuv = w.weight(u, v);
            if wuv == 0.0 {
                continue;
            }
            let want = if wuv > 0.0 { labels[u] } else { -labels[u] };
            if labels[v] == 0 {
                labels[v] = want;
                queue.push_back(v);
            } else if labels[v] != want {
                return Ok(GreedyOutcome::Inconsistent { i: u, j: v });
            }
        }
    }
    Ok(GreedyOutcome::Labels(labels))
}

/// Exact recovery holds when the candidate equals the truth up to a global
/// sign flip (the community matrices coincide).
pub fn exact_recovery_check(candidate: &[i8], truth: &[i8]) -> Result<bool> {
    if candidate.len() != truth.len() {
        return Err(Error::invalid(format!(
            "label length mismatch: {} vs {}",
            candidate.len(),
            truth.len()
        )));
    }
    check_labels(candidate, candidate.len())?;
    check_labels(truth, truth.len())?;
    let same = candidate.iter().zip(truth).all(|(a, b)| a == b);
    let flipped = candidate.iter().zip(truth).all(|(a, b)| *a == -b);
    Ok(same || flipped)
}

fn check_labels(labels: &[i8], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::invalid(format!(
            "label vector length {} does not match n = {n}",
            labels.len()
        )));
    }
    if labels.iter().any(|&l| l != 1 && l != -1) {
        return Err(Error::invalid("labels must be +1 or -1"));
    }
    Ok(())
}

/// End-to-end result of solve -> round -> certify on a consensus graph.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecoveryResult {
    pub labels: Vec<i8>,
    pub objective: f64,
    #[serde(rename = "lambda2")]
    pub certificate_lambda2: f64,
    pub certified: bool,
}

/// Convenience composition used by the pipeline: solve the SDP, round, and
/// certify the rounded labels.
pub fn recover(
    w: &SignedWeightedGraph,
    opts: &SdpOptions,
) -> Result<(RecoveryResult, SdpSolution)> {
    let sol = solve_sdp(w, opts)?;
    let labels = round_solution(&sol)?;
    let cert = dual_certificate(w, &labels)?;
    Ok((
        RecoveryResult {
            labels,
            objective: sol.objective,
            certificate_lambda2: cert.lambda2,
            certified: cert.certified,
        },
        sol,
    ))
}
