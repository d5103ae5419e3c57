use thiserror::Error;

/// The first invariant of a [`MonomialInstance`](crate::MonomialInstance) that
/// failed to hold.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error("need at least two variables, got {0}")]
    TooFewVariables(usize),
    #[error("exponent a[{index}] = {value} must be positive and finite")]
    NonPositiveExponent { index: usize, value: f64 },
    #[error("wedge index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("wedge indices must differ (i = j = {0})")]
    SameIndex(usize),
    #[error("ratio bound p = {0} must be positive and finite")]
    NonPositiveRatio(f64),
    #[error("p must be < q (p = {p}, q = {q})")]
    RatioOrder { p: f64, q: f64 },
    #[error("lower bound l = {0} must be positive and finite")]
    NonPositiveLower(f64),
    #[error("l must be < u < +inf (l = {l}, u = {u})")]
    BoundOrder { l: f64, u: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(#[from] InstanceError),
    #[error("instance file: {0}")]
    Schema(String),
    #[error("point has {got} coordinates but the instance has {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coordinate x[{index}] = {value} is negative or not finite")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("point does not lie on the face x_j = p x_i (relative gap {gap:e})")]
    NotOnLowerFace { gap: f64 },
    #[error("operation needs n = 2, instance has n = {0}")]
    RequiresTwoVariables(usize),
    #[error("operation needs a bilinear instance (a = (1, 1))")]
    RequiresBilinear,
    #[error("height z = {z} lies outside [{lower}, {upper}]")]
    HeightOutOfRange { z: f64, lower: f64, upper: f64 },
    #[error("branch point {point} lies outside the open interval ({lower}, {upper})")]
    BranchPointOutOfRange { point: f64, lower: f64, upper: f64 },
    #[error("search interval is empty after trimming (epsilon fraction {0})")]
    EmptySearchInterval(f64),
    #[error("point ({x1}, {x2}) lies outside the McCormick box")]
    OutsideBox { x1: f64, x2: f64 },
    #[error("invalid McCormick box: {0}")]
    InvalidBox(String),
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
