use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),

    #[error("duplicate axis `{0}`")]
    DuplicateAxis(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("table has {got} entries but the axes require {expected}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("negative or non-finite probability {0}")]
    InvalidProbability(f64),

    #[error("probabilities sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("axis groups overlap on `{0}`")]
    OverlappingAxes(String),

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("sequence length mismatch: {0}")]
    LengthMismatch(String),

    #[error("conditioning marginal is identically zero")]
    ZeroMarginal,

    #[error("auxiliary channel inconsistent with target: residual {residual:e} exceeds {tol:e}")]
    InconsistentAux { residual: f64, tol: f64 },

    #[error("enumeration budget exceeded: {needed} terms requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("typical set is empty: {0}")]
    EmptyTypicalSet(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unbound constant `{0}`")]
    UnboundConstant(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("no consistent auxiliary found: {0}")]
    NoFeasibleAux(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
