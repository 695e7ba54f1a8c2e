//! Experiment harness behind the `fedmycd` binary: built-in study
//! topologies, the end-to-end pipeline, the (M, K) sweep grid, and the
//! one-edge perturbation study.

pub mod experiments;
pub mod topologies;

pub use experiments::{
    derive_seed, perturb_study, run_pipeline, run_sweep, sweep_csv, PerturbRow, PipelineReport,
    SweepCell, SweepConfig,
};
