pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lies outside the domain")]
    OutsideDomain,
    #[error("non-unique projection: {0}")]
    NonUniqueProjection(String),
    #[error("outside the projection collar: {0}")]
    CollarViolation(String),
    #[error("no convergence after {iters} iterations: {context}")]
    NonConvergence { iters: usize, context: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("zero vector where a direction is required")]
    ZeroVector,
    #[error("degenerate gradient on the boundary")]
    DegenerateGradient,
    #[error("sampled graph is disconnected: {0}")]
    DisconnectedGraph(String),
    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),
}
