//! Error types, one enum per subsystem.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum GraphError {
    #[error("i/o error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse failure in {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown node label `{0}`")]
    UnknownLabel(String),
    #[error("self-loop on node `{0}` is not allowed")]
    SelfLoop(String),
    #[error("adjacency matrix is not symmetric at ({0}, {1})")]
    Asymmetric(String, String),
    #[error("duplicate reporter label `{0}`")]
    DuplicateReporter(String),
    #[error("a report set needs at least one reporter")]
    NoReporters,
}

#[derive(Error, Debug)]
pub enum TransformError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("criterion graph universe does not match: {0}")]
    UniverseMismatch(String),
    #[error("explicit pair list contains a self-pair `{0}`")]
    ExplicitSelfPair(String),
    #[error("explicit pair list contains duplicate pair `{0}--{1}`")]
    ExplicitDuplicate(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("social network matrix has a nonzero diagonal at `{0}`")]
    SelfTie(String),
    #[error("top-level matrix violates the line-graph structure at ({0}, {1})")]
    LineGraphInvariant(String, String),
}

#[derive(Error, Debug)]
pub enum StatError {
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("damping parameter must exceed 1, got {0}")]
    BadLambda(f64),
    #[error("toggle out of range: {0}")]
    ToggleOutOfRange(String),
    #[error("toggle addresses a fixed layer ({0}); only W and Y cells are free")]
    FixedLayer(String),
    #[error("toggle addresses the diagonal of Y (self-tie)")]
    ToggleSelfTie,
}

#[derive(Error, Debug)]
pub enum SamplerError {
    #[error(transparent)]
    Stat(#[from] StatError),
    #[error("model must declare at least one effect")]
    NoEffects,
    #[error("model must declare at least one free layer")]
    NoFreeLayers,
    #[error("structural zero mask out of range: {0}")]
    MaskOutOfRange(String),
    #[error("no free cells remain after applying structural zeros")]
    NoFreeCells,
    #[error("sample count must be at least 1")]
    NoSamples,
}

#[derive(Error, Debug)]
pub enum EstimError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("need at least p+1 = {need} samples, got {got}")]
    TooFewSamples { need: usize, got: usize },
    #[error("covariance of statistics is singular; collinear statistics: {0}")]
    SingularInformation(String),
    #[error(
        "statistic `{0}` has zero variance during phase 1; it does not respond to the free layers"
    )]
    DegenerateStatistic(String),
    #[error("estimation did not converge: max |t| = {max_t:.4} after {rounds} rounds")]
    NonConvergence { max_t: f64, rounds: usize },
    #[error("simulation degenerated: {0}")]
    Degenerate(String),
}

#[derive(Error, Debug)]
pub enum GofError {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("auxiliary statistics must include every model effect; missing `{0}`")]
    MissingEffect(String),
}

#[derive(Error, Debug)]
pub enum DirectError {
    #[error("reporter indices must differ (got {0})")]
    SameReporter(usize),
    #[error("index out of range: {0}")]
    OutOfRange(String),
}
