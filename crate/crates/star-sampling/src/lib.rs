//! Star sampling on graphs, with and without replacement.
//!
//! A star sample is a uniformly chosen vertex (the star center) together
//! with its one-hop neighbors (the star points). This crate implements the
//! three search variants — with replacement (SSR), without center
//! replacement (SSC), and without star replacement (SSS) — for finding any
//! member of a target vertex set, along with:
//!
//! - exact expected unit costs for SSR/SSC on arbitrary graphs and the exact
//!   SSR linear cost,
//! - bounds and approximations for all three variants on Erdős–Rényi graphs,
//!   driven only by the order `n`, the target cardinality `n0*`, and the
//!   edge density `s`,
//! - a seeded, embarrassingly parallel Monte Carlo harness that compares
//!   simulation against the analytics.
//!
//! Unit cost counts star samples until the first hit; linear cost counts the
//! extended degrees (center plus points) of all samples taken.

pub mod er;
pub mod error;
pub mod estimators;
pub mod graph;
pub mod montecarlo;
pub mod rng;
pub mod sampler;
pub mod stats;

pub use er::{asymptotic_star_edge_fraction, ErParams, ExtTargetMoments};
pub use error::{Error, Result};
pub use estimators::{Bounds, EstimatorInput, SssSchedule, WatchDrawCase, WatchDrawMoments};
pub use graph::{
    degree_stats, extended_neighborhood, DegreeStats, ExtendedTarget, Graph, TargetSet, VertexId,
};
pub use montecarlo::{
    log_spaced, run_experiment, sweep, table_experiment, CostSummary, Estimate, ExperimentSpec,
    GraphSource, TableRow, TrialSummary,
};
pub use sampler::{run, run_ssc, run_ssr, run_sss, CostResult, SampleRecord, SamplerOptions, Variant};
