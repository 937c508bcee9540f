//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by the jet-arithmetic layer.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum AdError {
    #[error("jet order {0} not supported (must be 1 or 2)")]
    UnsupportedOrder(usize),
    #[error("duplicate variable id {0} in seed set")]
    DuplicateVariable(usize),
    #[error("variable id {id} out of range for point of length {len}")]
    VariableOutOfRange { id: usize, len: usize },
    #[error("empty direction set")]
    EmptySeedSet,
    #[error("multi-index of degree {requested} exceeds accumulated jet order {capacity}")]
    DegreeOverflow { requested: usize, capacity: usize },
}

/// Errors raised by geometric operations.
#[derive(Debug, Error)]
pub enum FinslerError {
    #[error(transparent)]
    Ad(#[from] AdError),
    #[error("operation requires a nonzero tangent vector")]
    ZeroVector,
    #[error("strong convexity violated at x = {x:?}, v = {v:?}: min eigenvalue {eigenvalue:.6e}")]
    StrongConvexityViolation {
        x: Vec<f64>,
        v: Vec<f64>,
        eigenvalue: f64,
    },
    #[error("norm not positive at x = {x:?}, v = {v:?}: F = {value:.6e}")]
    NormNotPositive { x: Vec<f64>, v: Vec<f64>, value: f64 },
    #[error("Legendre solve did not converge for covector {alpha:?} at x = {x:?} (residual {residual:.3e} after {iterations} iterations)")]
    LegendreNoConvergence {
        x: Vec<f64>,
        alpha: Vec<f64>,
        residual: f64,
        iterations: usize,
    },
    #[error("effective dimension N = {n_eff} below manifold dimension n = {dim}")]
    EffectiveDimensionTooSmall { n_eff: f64, dim: usize },
    #[error("geodesic integrator step size underflow at t = {t:.6e}, x = {x:?}")]
    StepSizeUnderflow { t: f64, x: Vec<f64> },
    #[error("Jacobi frame ill-conditioned (condition number {cond:.3e})")]
    IllConditionedFrame { cond: f64 },
    #[error("distance solver returned an upper bound only for {from:?} -> {to:?} (best value {bound:.6e})")]
    DistanceUpperBoundOnly { from: Vec<f64>, to: Vec<f64>, bound: f64 },
    #[error("time step tau = {tau:.3e} violates the stability bound {bound:.3e} for the explicit scheme")]
    CflViolation { tau: f64, bound: f64 },
    #[error("field became non-finite at step {step}")]
    NonFiniteField { step: usize },
    #[error("vector field vanishes at node {node} and no fallback was provided")]
    ZeroVectorFieldNode { node: usize },
    #[error("gradient below threshold at node {node}; tensor evaluation rejected")]
    BelowThresholdNode { node: usize },
    #[error("requested time {t} outside trajectory range [{lo}, {hi}]")]
    TimeOutOfRange { t: f64, lo: f64, hi: f64 },
    #[error("trajectory has no snapshot at time {t} (snapshot times: {times:?})")]
    NoSnapshotAt { t: f64, times: Vec<f64> },
    #[error("solution must be positive for this check (min value {min:.6e})")]
    NonPositiveSolution { min: f64 },
    #[error("nonnegative field required (min value {min:.6e})")]
    NegativeTestFunction { min: f64 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed trajectory container: {0}")]
    MalformedContainer(String),
}

pub type Result<T> = std::result::Result<T, FinslerError>;
