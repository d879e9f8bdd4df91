use thiserror::Error;

/// Errors produced by model construction and the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("n_traders must be at least 2 (got {0})")]
    TooFewTraders(usize),

    #[error("n_traders {n} exceeds the enumeration capacity of {max}")]
    Capacity { n: usize, max: usize },

    #[error("beta must be finite and non-negative (got {0})")]
    InvalidBeta(f64),

    #[error("spin configurations must contain only +1 and -1 (found {0})")]
    InvalidSpin(i8),

    #[error("configuration length {len} does not match n_traders {n}")]
    LengthMismatch { len: usize, n: usize },

    #[error("spin sum {numerator} is not a magnetization state for {n} traders")]
    InvalidMagnetization { numerator: i64, n: usize },

    #[error("pair sum {0} is not a shell of the {1}-trader state space")]
    NotAShell(i64, usize),

    #[error("conditioning Hamiltonian is zero; the log-partition identity divides by it")]
    SingularConditioning,

    #[error("asymptotic energy pmf needs 2h + N > 0 (got h = {h}, N = {n})")]
    AsymptoticDomain { h: i64, n: usize },

    #[error("zero denominator in the asymptotic moment formula (beta = {beta})")]
    AsymptoticSingular { beta: f64 },

    #[error("saddle point invalid: 1 - (beta/2) m_prev^2 = {curvature} is not positive")]
    SaddlePointInvalid { curvature: f64 },

    #[error("no finite critical beta: conditioning magnetization is zero")]
    DegenerateConditioning,

    #[error("{0}")]
    Domain(String),

    #[error("tolerance must lie in (0, 1e-3] (got {0})")]
    InvalidTolerance(f64),

    #[error("class scheme error: {0}")]
    ClassScheme(String),

    #[error("observation {value} lies outside every class of the scheme")]
    ValueOutsideClasses { value: i64 },

    #[error("class {index} has zero probability under the null distribution")]
    DegenerateClass { index: usize },

    #[error("expected count for class {index} is not positive ({value})")]
    NonPositiveExpected { index: usize, value: f64 },

    #[error("alpha must lie strictly between 0 and 1 (got {0})")]
    InvalidAlpha(f64),

    #[error("trade input format error: {0}")]
    Format(String),

    #[error("windowing error: {0}")]
    Windowing(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
