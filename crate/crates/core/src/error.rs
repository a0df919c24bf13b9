use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph is disconnected ({reached} of {total} vertices reachable from 0)")]
    Disconnected { reached: usize, total: usize },
    #[error("vertex index {index} out of range for {n} vertices")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("reliable core is empty")]
    EmptyCore,
    #[error("vertex set is empty")]
    EmptySet,

    #[error("cross edges infeasible at block {block}: need {needed}, next block has {available}")]
    Infeasible { block: usize, needed: u128, available: u128 },
    #[error("vertex budget exceeded: {requested} > {budget}")]
    Budget { requested: u128, budget: usize },

    #[error("{name} = {value} outside its domain {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),
    #[error("grid point {lambda} lies outside the reliable window [0, {window}]")]
    GridOutOfRange { lambda: f64, window: f64 },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("subset size {0} too large for exhaustive search (max 20)")]
    TooLarge(usize),
    #[error("graph carries no generator labels")]
    MissingLabels,

    #[error("ball of radius {radius} leaves the reliable core")]
    CoreExceeded { radius: usize },
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("rate estimate {r_inf_hat} leaves no admissible s below {limit}")]
    RateTooHigh { r_inf_hat: f64, limit: f64 },
    #[error("degree lower bound (k+1)/s <= d_k fails up to the end of the core at s = {s}")]
    LemmaFails { s: f64 },
    #[error("vertex {0} has neighbours outside the truncation")]
    BoundaryVertex(usize),
    #[error("heat solver failed: {0}")]
    SolverFailure(String),

    #[error("{0}")]
    Usage(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
