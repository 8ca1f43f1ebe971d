use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Hurst parameter {0} outside (0, 1)")]
    InvalidHurst(f64),
    #[error("Hurst parameter {h} outside the admissible range {range}")]
    HurstOutOfRange { h: f64, range: &'static str },
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("integer overflow computing {0}")]
    Overflow(&'static str),
    #[error("series did not reach tolerance {tol:e} within {terms} terms (tail bound {tail:e})")]
    NonConvergence { tol: f64, terms: u64, tail: f64 },
    #[error("grid: {0}")]
    InvalidGrid(&'static str),
    #[error("path length {got} does not match grid point count {expected}")]
    PathLength { expected: usize, got: usize },
    #[error("path value at t = 0 is {0}, expected exactly 0")]
    NotAnchored(f64),
    #[error("time {t} beyond the covered range [0, {max}]")]
    HorizonExceeded { t: f64, max: f64 },
    #[error("spatial index {index} outside the path range [{first}, {last}]")]
    SpatialRange { index: i64, first: i64, last: i64 },
    #[error("weight function provides derivatives up to order {available}, {required} required")]
    InsufficientOrder { required: usize, available: usize },
    #[error("need at least {required} samples, got {got}")]
    TooFewSamples { required: usize, got: usize },
    #[error("sample contains NaN")]
    NaNSample,
    #[error("walk step {index} is {value}, expected +1 or -1")]
    InvalidStep { index: usize, value: i8 },
}
