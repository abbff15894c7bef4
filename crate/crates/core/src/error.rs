use thiserror::Error;

/// Errors raised by the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p must satisfy p > 1, got {0}")]
    InvalidExponent(f64),

    #[error("lookup table needs at least 256 intervals, got {0}")]
    TableTooSmall(usize),

    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e})")]
    QuadratureNonConvergence { a: f64, b: f64, estimate: f64 },

    #[error("quarter period mismatch: table end {table} vs closed form {closed}")]
    QuarterPeriodMismatch { table: f64, closed: f64 },

    #[error("x = {0} lies outside [0, 1]")]
    OutOfDomain(f64),

    #[error("reversed integration bounds [{a}, {b}]")]
    ReversedBounds { a: f64, b: f64 },

    #[error("invalid sampled potential: {0}")]
    InvalidSamples(String),

    #[error("csv: {0}")]
    Csv(String),

    #[error("eigen-parameter must be positive, got {0}")]
    NonPositiveLambda(f64),

    #[error("non-monotone phase at x = {x} for lambda = {lambda}")]
    NonMonotonePhase { x: f64, lambda: f64 },

    #[error("step underflow: step {step:e} for lambda = {lambda}")]
    StepUnderflow { step: f64, lambda: f64 },

    #[error("lambda = {lambda} is outside the admissible range for index {n}")]
    Inadmissible { n: usize, lambda: f64 },

    #[error("no bracket found for index {n} around seed {seed}")]
    NoBracket { n: usize, seed: f64 },

    #[error("root finder did not converge for index {n} (mismatch {mismatch:e})")]
    RootNotConverged { n: usize, mismatch: f64 },

    #[error("missing node: found {found} of {expected} interior nodes")]
    MissingNode { found: usize, expected: usize },

    #[error("index j = {j} out of range for n = {n}")]
    IndexOutOfRange { n: usize, j: usize },

    #[error("need at least {needed} indices, got {got}")]
    TooFewIndices { needed: usize, got: usize },

    #[error("empty evaluation grid")]
    EmptyGrid,

    #[error("grid point {0} not in (0, 1)")]
    GridOutOfRange(f64),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
}

pub type Result<T> = std::result::Result<T, Error>;
