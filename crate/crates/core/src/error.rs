use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension {0} not supported (expected 2, 4 or 9)")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |M - M^dagger| = {max_asymmetry:.3e}")]
    NotHermitian { max_asymmetry: f64 },

    #[error("trace {trace_re:.12} + {trace_im:.3e}i is not 1")]
    BadTrace { trace_re: f64, trace_im: f64 },

    #[error("density matrix has negative eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("parameter `{name}` = {value} out of range: {reason}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("qubit splitting omega0 = {omega0:.6} rad/us is not positive (field beyond the ground-state level crossing)")]
    BelowLevelCrossing { omega0: f64 },

    #[error("no steady state: decay rate gamma must be > 0")]
    NoSteadyState,

    #[error("internal step {dt:.3e} us exceeds the allowed maximum {max:.3e} us")]
    StepTooLarge { dt: f64, max: f64 },

    #[error("positivity lost at t = {t:.6} us: min eigenvalue {min_eigenvalue:.3e}")]
    PositivityLost { t: f64, min_eigenvalue: f64 },

    #[error("subspace reduction mismatch at ({row}, {col}): expected {expected:.12e}, found {found:.12e}")]
    SubspaceMismatch {
        row: usize,
        col: usize,
        expected: f64,
        found: f64,
    },

    #[error("series never drops below the threshold within {t_last:.6} us; increase the storage time")]
    SeriesTooShort { t_last: f64 },

    #[error("grid too coarse: classification changes across a gap of {gap:.3} in Omega/gamma (max 0.1); refine the grid")]
    GridTooCoarse { gap: f64 },

    #[error("audit mismatch at grid index {index}: analytic {analytic:.9} vs integrated {numeric:.9}")]
    AuditMismatch {
        index: usize,
        analytic: f64,
        numeric: f64,
    },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
