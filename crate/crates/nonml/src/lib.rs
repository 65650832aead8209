//! nonml: turn a collection of reported graphs linked by a social network
//! into a multilevel network, compute its configuration statistics, and
//! simulate, estimate and assess exponential random graph models over it.

// Symmetric matrix fills index mirrored positions; iterator forms obscure them.
#![allow(clippy::needless_range_loop)]

pub mod bits;
pub mod direct;
pub mod error;
pub mod estimator;
pub mod gof;
pub mod graph;
pub mod io;
pub mod multilevel;
pub mod pair_index;
pub mod sampler;
pub mod seed;
pub mod stats;

pub use graph::{LabeledGraph, ReportSet};
pub use multilevel::{
    build_affiliation, build_colouring, build_line_graph, DropReport, MultilevelNetwork,
};
pub use pair_index::{PairIndex, PairPolicy};
pub use stats::{
    all_statistic_ids, census_oracle, change_statistic, compute_statistics, dyadic_covariate,
    summary_stats, StatVector, Statistic, StatisticId, Toggle,
};
