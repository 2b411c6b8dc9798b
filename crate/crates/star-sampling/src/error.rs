use thiserror::Error;

/// Errors reported by graph construction, samplers, and estimators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex id {id} out of range for graph of order {n}")]
    VertexOutOfRange { id: u32, n: usize },

    #[error("graph order must be at least 1")]
    EmptyGraph,

    #[error("target set must not be empty")]
    EmptyTarget,

    #[error("target cardinality {n0_star} exceeds graph order {n}")]
    TargetTooLarge { n0_star: usize, n: usize },

    #[error("probability {value} outside [0, 1]")]
    InvalidProbability { value: f64 },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("count argument {name} = {value} outside its valid range")]
    CountOutOfRange { name: &'static str, value: usize },

    #[error("sample index {t} beyond the schedule horizon {horizon}")]
    BeyondHorizon { t: usize, horizon: usize },

    #[error("{op} is undefined at s = {s}; at s = 0 use the SSC/urn forms, at s = 1 the cost is a single sample")]
    DegenerateDensity { op: &'static str, s: f64 },

    #[error("watch/draw subset case requires an empty immune set, got {n_z0} immune vertices")]
    ImmuneSetNotEmpty { n_z0: usize },

    #[error("immune set size {n_z0} exceeds watch set size {n_w0}")]
    ImmuneSetTooLarge { n_z0: usize, n_w0: usize },

    #[error("experiment needs at least one trial")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, Error>;
