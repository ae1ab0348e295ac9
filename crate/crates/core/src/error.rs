use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coefficient {index} is negative ({value})")]
    NegativeCoefficient { index: usize, value: String },
    #[error("all coefficients are zero")]
    ZeroVector,
    #[error("state has no coefficients")]
    EmptyVector,
    #[error("invalid number at {field}: {reason}")]
    InvalidNumber { field: String, reason: String },
    #[error("malformed input at {field}: {reason}")]
    Malformed { field: String, reason: String },
    #[error("tensor product would have {len} entries, cap is {cap}")]
    SizeOverflow { len: u128, cap: usize },
    #[error("cannot pad a length-{len} state down to {target}")]
    ShrinkNotAllowed { len: usize, target: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("the pair is not incomparable")]
    NotIncomparable,
    #[error("pair belongs to case {found}, expected case {expected}")]
    CaseMismatch { expected: String, found: String },
    #[error("assisted conversion is not feasible with the requested auxiliary state")]
    InfeasibleAssist,
    #[error("no auxiliary coefficient c in [1/2, 1) makes the conversion deterministic")]
    NoFeasibleC,
    #[error("closed-form c0 = {closed_form} disagrees with the oracle supremum {oracle}")]
    FormulaMismatch {
        closed_form: String,
        oracle: String,
        /// Plan built from the oracle value, serialized.
        plan: Box<serde_json::Value>,
    },
    #[error("parameter window empty after {attempts} attempts")]
    EmptyWindow { attempts: usize },
    #[error("closed-form constraints held but the oracle rejected the joint conversion: {detail}")]
    OracleRejected { detail: String },
    #[error("source coefficients are not strictly distinct")]
    DegenerateSource,
    #[error("two-copy split infeasible: {0}")]
    InfeasibleSplit(String),
    #[error("boundary case a2^2 = a1*a3 is not covered by the closed forms")]
    BoundaryCase,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Errors describing a definitive negative answer rather than bad input.
    pub fn is_outcome(&self) -> bool {
        matches!(
            self,
            Error::NotIncomparable
                | Error::CaseMismatch { .. }
                | Error::InfeasibleAssist
                | Error::NoFeasibleC
                | Error::FormulaMismatch { .. }
                | Error::EmptyWindow { .. }
                | Error::OracleRejected { .. }
                | Error::DegenerateSource
                | Error::InfeasibleSplit(_)
                | Error::BoundaryCase
        )
    }

    pub fn code(&self) -> &'static str {
        match self {
            Error::NegativeCoefficient { .. } => "NegativeCoefficient",
            Error::ZeroVector => "ZeroVector",
            Error::EmptyVector => "EmptyVector",
            Error::InvalidNumber { .. } => "InvalidNumber",
            Error::Malformed { .. } => "Malformed",
            Error::SizeOverflow { .. } => "SizeOverflow",
            Error::ShrinkNotAllowed { .. } => "ShrinkNotAllowed",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::InvalidDimension(_) => "InvalidDimension",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::NotIncomparable => "NotIncomparable",
            Error::CaseMismatch { .. } => "CaseMismatch",
            Error::InfeasibleAssist => "InfeasibleAssist",
            Error::NoFeasibleC => "NoFeasibleC",
            Error::FormulaMismatch { .. } => "FormulaMismatch",
            Error::EmptyWindow { .. } => "EmptyWindow",
            Error::OracleRejected { .. } => "OracleRejected",
            Error::DegenerateSource => "DegenerateSource",
            Error::InfeasibleSplit(_) => "InfeasibleSplit",
            Error::BoundaryCase => "BoundaryCase",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }
}
