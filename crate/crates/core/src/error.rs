use thiserror::Error;

/// Errors raised by scheme construction, verification and integration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient {index} of `{label}` is not finite")]
    NonFiniteCoefficient { label: String, index: usize },

    #[error("`{label}` is inconsistent: |sum - 1| = {residual:e}")]
    Inconsistent { label: String, residual: f64 },

    #[error("sum(a) and sum(b) differ by {difference:e}; the a/b to alpha relation does not hold")]
    UnequalSums { difference: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("base scheme has declared order {actual}, expected {expected}")]
    OrderMismatch { expected: u32, actual: u32 },

    #[error("branch index l = {l} outside [{lo}, {hi}] for n = {n}")]
    BranchOutOfRange { n: u32, l: i32, lo: i32, hi: i32 },

    #[error("no root with positive real parts raises order {from} to {to}; admissible target orders: {admissible:?}")]
    NoAdmissibleRoot {
        from: u32,
        to: u32,
        admissible: Vec<u32>,
    },

    #[error("coefficients are not all real (max |Im| = {max_im:e})")]
    NotReal { max_im: f64 },

    #[error("sum of cubes is {residual:e}, not zero")]
    CubeConditionViolated { residual: f64 },

    #[error("no negative coefficient found: {0}")]
    NoNegativeWitness(String),

    #[error("system has {actual} parts, operation needs {expected}")]
    PartCount { expected: String, actual: usize },

    #[error("flow of part {part} failed at step {step}: {reason}")]
    Flow {
        part: usize,
        step: usize,
        reason: String,
    },

    #[error("polynomial parity violated in {which}: coefficient of h^{power} is {magnitude:e}")]
    Parity {
        which: &'static str,
        power: usize,
        magnitude: f64,
    },

    #[error("phase undefined: {0}")]
    PhaseUndefined(String),

    #[error("state dimension {actual} does not match system dimension {expected}")]
    Dimension { expected: usize, actual: usize },

    #[error("unknown {kind} `{name}`; available: {available}")]
    UnknownName {
        kind: &'static str,
        name: String,
        available: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
