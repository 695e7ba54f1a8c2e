//! Federated myopic community detection.
//!
//! A network's community structure is recovered by a central server from
//! censored, partial observations reported by many clients. Each client sees
//! only the node pairs inside its field of view, samples edges from a
//! planted two-community model, flips each report with a censorship
//! probability, and ships the result to the server. The server folds all
//! reports into a signed weighted consensus graph, solves a semidefinite
//! relaxation to estimate the community matrix, and can verify optimality
//! with a dual certificate.
//!
//! The crate is organized along that pipeline:
//!
//! - [`spectral`]: dense symmetric eigensolver and restricted spectral
//!   quantities.
//! - [`graph`]: signed weighted graphs, signed degrees and boundaries, and
//!   the exhaustive signed weighted edge expansion.
//! - [`federation`]: the generative client model and evidence construction.
//! - [`consensus`]: server-side aggregation, signal coefficients, expected
//!   and signed consensus graphs.
//! - [`recovery`]: low-rank coordinate-ascent SDP solver, rounding, dual
//!   certificate, brute-force oracle, and the greedy propagation recoverer.
//! - [`theory`]: executable recovery and impossibility conditions.

pub mod consensus;
mod error;
pub mod federation;
pub mod graph;
pub mod recovery;
pub mod spectral;
pub mod theory;

pub use error::{Error, Result};
