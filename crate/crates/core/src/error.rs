use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("Gamma pole: t + r = {0} is a nonpositive integer")]
    GammaPole(f64),
    #[error("weight table needs at least one entry")]
    EmptyWeights,
    #[error("grid index {k} outside the admissible range {first}..={last}")]
    OutOfRange { k: i64, first: i64, last: i64 },
    #[error("insufficient history: sample at {needed} required, signal starts at {first}")]
    InsufficientHistory { needed: i64, first: i64 },
    #[error("order {0} outside the open interval (0, 1)")]
    OrderOutOfRange(f64),
    #[error("signals cover different index ranges")]
    LengthMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value in input")]
    NonFinite,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("matrix is not symmetric positive definite")]
    NotSpd,
    #[error("matrix is singular")]
    Singular,
    #[error("exponents {p} and {q} are not conjugate")]
    NotConjugate { p: f64, q: f64 },
    #[error("power {num}/{den} undefined for negative base {base}")]
    PowerDomain { base: f64, num: u64, den: u64 },
    #[error("implicit step at k={k} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        k: i64,
        iterations: usize,
        residual: f64,
        last_iterate: Vec<f64>,
    },
    #[error("implicit step at k={k} produced a non-finite iterate")]
    Overflow { k: i64 },
    #[error("unknown system `{0}`")]
    UnknownSystem(String),
}
