//! Error types shared across the engine.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors from graph ingestion, model validation, and the solvers.
///
/// Variants group into three categories that the CLI maps onto exit codes:
/// input/validation problems, numerical failures, and resource caps.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed edge-list line; `line` is 1-based and counts comments.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The parsed edge list contained no usable arcs.
    #[error("edge list contains no arcs")]
    EmptyGraph,

    /// Transmission inflow sum exceeded 1 at a node (reported by original label).
    #[error("transmission inflow sum {theta} at node {node} exceeds 1")]
    InflowBound { node: u64, theta: f64 },

    /// A per-arc transmission probability fell outside (0, 1].
    #[error("transmission probability {value} on arc {src} -> {dst} is outside (0, 1]")]
    ArcProbability { src: u64, dst: u64, value: f64 },

    /// A damping coefficient fell outside the open interval (0, 1).
    #[error("invalid damping: {0}; valid range is (0, 1) exclusive")]
    Damping(String),

    #[error("{0}")]
    InvalidArgument(String),

    /// The iterative solver ran out of sweeps before meeting its tolerance.
    #[error("solver did not converge within {iterations} sweeps (last update {last_update:.3e})")]
    NonConvergence { iterations: usize, last_update: f64 },

    /// NaN/Inf or another breakdown that indicates corrupted inputs.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An operation was asked to run beyond its configured size cap.
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    /// A node label that does not exist in the graph.
    #[error("unknown node label {0}")]
    UnknownLabel(u64),
}
