use thiserror::Error;

/// Everything the library can fail with. Variant names follow the error
/// codes printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole of zeta at s = 1")]
    Pole,
    #[error("UNRESOLVED: zeros in [{t_lo}, {t_hi}] not separated after {halvings} grid halvings")]
    Unresolved { t_lo: f64, t_hi: f64, halvings: u32 },
    #[error("NONINTEGER: counting value {value} at T = {t} is not within 1e-3 of an integer")]
    NonInteger { t: f64, value: f64 },
    #[error("STEP_FAIL: argument step at t = {t}, sigma = {sigma} needed more than 20 halvings")]
    StepFail { t: f64, sigma: f64 },
    #[error("NO_CONVERGENCE at t = {t}: {detail}")]
    NoConvergence { t: f64, detail: String },
    #[error("OSCILLATION: Newton iteration for n = {n} did not bracket the zero")]
    Oscillation { n: u64 },
    #[error("MULTIPLE_CANDIDATES: window around t = {t} holds {count} solutions for n = {n}")]
    MultipleCandidates { n: u64, t: f64, count: usize },
    #[error("CUTOFF_EXCEEDED: {required} primes required, cap is {cap}")]
    CutoffExceeded { required: u64, cap: u64 },
    #[error("NONPOSITIVE_NORM: normalization at t = {t} is not positive")]
    NonpositiveNorm { t: f64 },
    #[error("COUNT_MISMATCH on [{t_lo}, {t_hi}]: found {found} sign changes, counting formula gives {expected}")]
    CountMismatch { t_lo: f64, t_hi: f64, found: usize, expected: i64 },
    #[error("MALFORMED_LINE {line}: {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("NON_MONOTONE at line {line}: {prev} then {next}")]
    NonMonotone { line: usize, prev: f64, next: f64 },
    #[error("GAP_IN_INDICES: expected n = {expected}, got {got}")]
    GapInIndices { expected: u64, got: u64 },
    #[error("HEIGHT_EXCEEDED: |t| = {t} above the supported height {max}")]
    HeightExceeded { t: f64, max: f64 },
    #[error("bad character: {0}")]
    Character(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
