use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum ChaosError {
    #[error("unknown system '{name}'; nearest matches: {suggestions:?}")]
    UnknownSystem {
        name: String,
        suggestions: Vec<String>,
    },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },
    #[error("trajectory diverged: state norm {norm:.3e} exceeded bound {bound:.3e} at t = {t}")]
    Divergence { norm: f64, bound: f64, t: f64 },
    #[error("adaptive step size underflow at t = {t} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    #[error("series too short: need at least {needed} points, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("signal has no frequencies distinguishable from the surrogate null")]
    NoSignificantFrequency,
    #[error("Lyapunov spectrum failed to converge: residual {residual:.3e} > tol {tol:.3e} after {periods} periods")]
    NonConvergence {
        residual: f64,
        tol: f64,
        periods: usize,
    },
    #[error("too few admissible pairs after Theiler exclusion: {remaining}")]
    InsufficientPairs { remaining: usize },
    #[error("sample entropy undefined: no template matches at m = {m}, scale = {scale}")]
    UndefinedEntropy { m: usize, scale: usize },
    #[error("actual series has zero range; MARRE undefined")]
    ZeroRange,
    #[error("in-sample series has zero one-step naive error; MASE undefined")]
    ZeroScale,
    #[error("input vector has zero variance; rank correlation undefined")]
    ZeroVariance,
    #[error("no valid pairs remain after filtering zero-denominator entries")]
    EmptyAfterFiltering,
    #[error("model not fitted; call fit before predict")]
    NotFitted,
    #[error("invalid horizon: {0}")]
    InvalidHorizon(i64),
    #[error("invalid importance plan: {0}")]
    InvalidPlan(String),
    #[error("resampling would upsample: target spacing {target:.3e} < source spacing {available:.3e}")]
    UpsampleRejected { target: f64, available: f64 },
    #[error("non-uniform sampling: max relative spacing deviation {deviation:.3e}")]
    NonUniformSampling { deviation: f64 },
    #[error("expected dataset file missing: {path}")]
    MissingFile { path: String },
    #[error("checksum mismatch for {path}: manifest {expected}, file {got}")]
    ChecksumMismatch {
        path: String,
        expected: String,
        got: String,
    },
    #[error("missing annotation fields: {fields:?}")]
    MissingAnnotation { fields: Vec<String> },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ChaosError>;
