use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("capacity exceeded: {required} entries required, cap is {cap}")]
    Capacity { required: u128, cap: usize },

    #[error("degenerate spectrum: every cost equals {0}")]
    DegenerateSpectrum(f64),

    #[error("histogram mode: {0}")]
    HistogramMode(String),

    #[error("gaussian fit: {0}")]
    Fit(String),

    #[error("dimension mismatch: state has {state} amplitudes, space has {space} costs")]
    Dimension { state: usize, space: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("insufficient samples: need at least 2, got {0}")]
    InsufficientSamples(usize),

    #[error("degenerate sample: zero variance")]
    DegenerateSample,

    #[error("gaussian model violated: alpha = {0} (must exceed 1)")]
    GaussianModel(f64),

    #[error("invalid reference p_s: {0}")]
    InvalidReference(f64),

    #[error("cost {0} not present in the solution space")]
    CostNotFound(f64),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("prediction failed: {0}")]
    Prediction(String),

    #[error("budget: {0}")]
    Budget(String),

    #[error("target {target} outside boostable band [{lo}, {hi}]")]
    OutOfReach { target: f64, lo: f64, hi: f64 },

    #[error("wrong problem kind: expected {expected}, found {found}")]
    Kind { expected: &'static str, found: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("circuit is not diagonal: found {0}")]
    NotDiagonal(String),

    #[error("qasm parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error records.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidAssignment(_) => "invalid_assignment",
            Error::InvalidSize(_) => "invalid_size",
            Error::InvalidProblem(_) => "invalid_problem",
            Error::Capacity { .. } => "capacity",
            Error::DegenerateSpectrum(_) => "degenerate_spectrum",
            Error::HistogramMode(_) => "histogram_mode",
            Error::Fit(_) => "fit",
            Error::Dimension { .. } => "dimension",
            Error::InvalidArgument(_) => "invalid_argument",
            Error::InsufficientSamples(_) => "insufficient_samples",
            Error::DegenerateSample => "degenerate_sample",
            Error::GaussianModel(_) => "gaussian_model",
            Error::InvalidReference(_) => "invalid_reference",
            Error::CostNotFound(_) => "not_found",
            Error::UndefinedCorrelation(_) => "undefined_correlation",
            Error::Prediction(_) => "prediction",
            Error::Budget(_) => "budget",
            Error::OutOfReach { .. } => "out_of_reach",
            Error::Kind { .. } => "kind",
            Error::Unsupported(_) => "unsupported",
            Error::NotDiagonal(_) => "not_diagonal",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
