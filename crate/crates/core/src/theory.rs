//! Executable forms of the recovery guarantee and the single-client
//! impossibility bound.
//!
//! The recovery checker evaluates the explicit sufficient condition for the
//! SDP to recover the planted communities: the signed consensus graph must
//! have strictly positive edge expansion, and the accumulated reporting
//! variance must clear a threshold tied to the expansion and `log n`. The
//! impossibility checker evaluates the Fano-style lower bound showing when
//! no estimator can recover a single client's local structure from its own
//! censored evidence.

use serde::Serialize;

use crate::consensus::{noise_proxy, signed_consensus};
use crate::error::{Error, Result};
use crate::federation::{ClientSpec, ModelSpec, Validation};
use crate::graph::{signed_edge_expansion_with, ExpansionOptions};

/// Outcome of the exact-recovery sufficient condition.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryConditionReport {
    /// Signed weighted edge expansion of the signed consensus graph.
    pub phi_bar: f64,
    /// `max_i |sum_{j,k} s(1-s)|`.
    pub noise: f64,
    /// `(3 phi^2 - 8 phi log n) / (48 log n)`, natural logarithm.
    pub threshold: f64,
    /// `phi_bar > 0` and `4 * noise <= threshold`.
    pub satisfied: bool,
    /// `2/n` when satisfied; the vacuous bound 1 otherwise.
    pub failure_probability_bound: f64,
}

/// Evaluate the recovery condition with the default enumeration cap.
pub fn recovery_condition(model: &ModelSpec) -> Result<RecoveryConditionReport> {
    recovery_condition_with(model, &ExpansionOptions::default())
}

/// Evaluate the recovery condition; the expansion of the signed consensus
/// graph is computed exhaustively, so `n` must fit under the enumeration
/// cap in `opts`.
pub fn recovery_condition_with(
    model: &ModelSpec,
    opts: &ExpansionOptions,
) -> Result<RecoveryConditionReport> {
    model.validate(Validation::Relaxed)?;
    if model.n < 2 {
        return Err(Error::invalid("recovery condition needs n >= 2"));
    }
    let bar = signed_consensus(model)?;
    let phi_bar = signed_edge_expansion_with(&bar, opts)?.phi_g;
    let noise = noise_proxy(model)?;
    let log_n = (model.n as f64).ln();
    let threshold = (3.0 * phi_bar * phi_bar - 8.0 * phi_bar * log_n) / (48.0 * log_n);
    let satisfied = phi_bar > 0.0 && 4.0 * noise <= threshold;
    Ok(RecoveryConditionReport {
        phi_bar,
        noise,
        threshold,
        satisfied,
        failure_probability_bound: if satisfied { 2.0 / model.n as f64 } else { 1.0 },
    })
}

/// The two per-client signal coefficients:
/// `s_+ = p + r - 2 p r` (same-community pairs) and
/// `s_- = q + r - 2 q r` (cross-community pairs).
pub fn client_signal_coeffs(spec: &ClientSpec) -> (f64, f64) {
    let s_plus = spec.p + spec.r - 2.0 * spec.p * spec.r;
    let s_minus = spec.q + spec.r - 2.0 * spec.q * spec.r;
    (s_plus, s_minus)
}

/// Bernoulli Kullback-Leibler divergence
/// `KL(a || b) = a log(a/b) + (1-a) log((1-a)/(1-b))`, with the usual
/// `0 log 0 = 0` convention.
pub fn kl_bernoulli(a: f64, b: f64) -> f64 {
    fn term(x: f64, y: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else {
            x * (x / y).ln()
        }
    }
    term(a, b) + term(1.0 - a, 1.0 - b)
}

/// Outcome of the single-client impossibility bound.
#[derive(Debug, Clone, Serialize)]
pub struct ImpossibilityReport {
    pub s_plus: f64,
    pub s_minus: f64,
    /// `(1-2r)^2 (p-q)^2 / min(s_+(1-s_+), s_-(1-s_-))`.
    pub kl_ratio: f64,
    /// `n_k / (2 |fov|)`; local recovery is impossible when the ratio stays
    /// under this.
    pub threshold: f64,
    /// Fano lower bound on any estimator's failure probability:
    /// `1 - (|fov| KLmax + log 2) / (n_k log 2)` with the exact Bernoulli
    /// divergences.
    pub fano_bound: f64,
    pub impossible: bool,
}

/// Evaluate the impossibility condition for one client with `n_k`
/// non-isolated nodes.
///
/// The variance denominator takes the smaller of the two Bernoulli
/// variances, `min(s_+(1-s_+), s_-(1-s_-))`, which is what the divergence
/// bounds behind the ratio actually produce.
pub fn impossibility_condition(spec: &ClientSpec, n_k: usize) -> Result<ImpossibilityReport> {
    if n_k == 0 {
        return Err(Error::invalid("impossibility condition needs n_k >= 1"));
    }
    let fov_size = spec.fov_size();
    if fov_size == 0 {
        return Err(Error::invalid(
            "impossibility condition needs a nonempty field of view",
        ));
    }
    let (s_plus, s_minus) = client_signal_coeffs(spec);
    let numerator = (1.0 - 2.0 * spec.r).powi(2) * (spec.p - spec.q).powi(2);
    let denominator = (s_plus * (1.0 - s_plus)).min(s_minus * (1.0 - s_minus));
    let kl_ratio = numerator / denominator;
    let threshold = n_k as f64 / (2.0 * fov_size as f64);
    let ln2 = std::f64::consts::LN_2;
    let kl_max = kl_bernoulli(s_plus, s_minus).max(kl_bernoulli(s_minus, s_plus));
    let fano_bound = 1.0 - (fov_size as f64 * kl_max + ln2) / (n_k as f64 * ln2);
    Ok(ImpossibilityReport {
        s_plus,
        s_minus,
        kl_ratio,
        threshold,
        fano_bound,
        impossible: kl_ratio <= threshold,
    })
}
