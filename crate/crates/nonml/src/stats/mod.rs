//! Configuration statistics: registry, exact engine, change statistics,
//! brute-force census oracle, and degree/clustering summaries.

mod census;
mod change;
mod engine;
mod registry;
mod summary;

pub use census::census_oracle;
pub use change::{change_statistic, Toggle};
pub use engine::{compute_statistics, dyadic_covariate};
pub use registry::{
    StatRequest, StatVector, Statistic, StatisticId, ALL_STATISTICS, DEFAULT_LAMBDA,
};
pub use summary::{
    clustering_ratio, sample_sd, sample_skewness, summary_stats, two_mode_clustering_ratio,
    SummaryRow,
};

pub(crate) use change::delta_up;

/// Every registry statistic at the default damping.
pub fn all_statistic_ids() -> Vec<StatisticId> {
    ALL_STATISTICS
        .iter()
        .map(|&s| StatisticId::new(s))
        .collect()
}
