//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("point ({x}, {y}) is not in the open unit disk")]
    DomainError { x: f64, y: f64 },

    #[error("degenerate configuration: ideal endpoints at {a} and {b} rad coincide")]
    DegenerateConfiguration { a: f64, b: f64 },

    #[error("geodesics intersect: {context}")]
    IntersectingGeodesics { context: String },

    #[error("well at {at} is degenerate: f'({at}) = {value} <= 0")]
    NondegenerateWellViolation { at: f64, value: f64 },

    #[error("potential fails nonnegativity: F({at}) = {value}")]
    NegativePotential { at: f64, value: f64 },

    #[error("Newton iteration diverged after {iterations} steps (residual {residual:e})")]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("profile derivative not strictly positive: min U' = {min_derivative:e} at t = {at}")]
    MonotonicityFailure { min_derivative: f64, at: f64 },

    #[error("fit window holds {nodes} nodes, need at least {required}")]
    WindowTooSmall { nodes: usize, required: usize },

    #[error("eigenvalue iteration stalled after {iterations} iterations (change {change:e})")]
    IterationStall { iterations: usize, change: f64 },

    #[error("exponent delta = {delta} outside (0, {max}) for n = {n}")]
    ExponentOutOfRange { delta: f64, max: f64, n: usize },

    #[error("supersolution sign condition fails: L0 v / weight = {worst:e} at t = {at_t}, r = {at_r}")]
    SupersolutionViolation { worst: f64, at_t: f64, at_r: f64 },

    #[error("minimal separation D_H = {d_h} is below the required {required}")]
    SeparationTooSmall { d_h: f64, required: f64 },

    #[error("field/grid mismatch: {0}")]
    MaskError(String),

    #[error("truncation too tight: |tau| = {min_tau} at a boundary cell away from the ideal endpoints (need > {required})")]
    TruncationTooTight { min_tau: f64, required: f64 },

    #[error("contraction failure: correction update grew over {window} consecutive iterations (last {last:e})")]
    ContractionFailure { window: usize, last: f64 },

    #[error("linear solve stagnated after {iterations} iterations (relative residual {relative_residual:e})")]
    LinearSolveFailure { iterations: usize, relative_residual: f64 },

    #[error("empty nodal set")]
    EmptyNodalSet,

    #[error("precondition violated: {0}")]
    Precondition(String),
}
