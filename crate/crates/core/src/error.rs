use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(thiserror::Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid integration range: lo={lo} > hi={hi}")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("unsupported elasticity of substitution sigma={0} (need sigma > 0 and sigma != 1)")]
    UnsupportedSigma(f64),
    #[error("sigma-degenerate aggregate: non-finite output for sigma={0}")]
    SigmaDegenerate(f64),
    #[error("automation frontier z*={z_star} outside [0, {task_mass}]")]
    FrontierOutOfRange { z_star: f64, task_mass: f64 },
    #[error("production labor must be positive")]
    ZeroLabor,
    #[error("productivity ratio a_L/a_K decreases near z={at}")]
    ProfileViolation { at: f64 },
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("invalid shock schedule: {0}")]
    InvalidShock(String),
    #[error("non-finite state at step {step} (t={t}): {what}")]
    NonFiniteState { step: usize, t: f64, what: &'static str },
    #[error("parameter ranges are empty")]
    EmptyRanges,
    #[error("trajectory too short for convergence check: {0} records")]
    TrajectoryTooShort(usize),
    #[error("no training data")]
    EmptyData,
    #[error("feature arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("exact Shapley enumeration supports at most {max} features, got {got}")]
    TooManyFeatures { got: usize, max: usize },
    #[error("Shapley background set is empty")]
    EmptyBackground,
    #[error("degenerate split: {train} training rows, {validation} validation rows")]
    DegenerateSplit { train: usize, validation: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter { name, value, reason }
    }
}
