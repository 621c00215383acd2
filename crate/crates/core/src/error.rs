use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    DegreeZero,
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous: found degrees {0} and {1}")]
    NotHomogeneous(u32, u32),
    #[error("variable x{index} out of range for x0..x{n}")]
    BadVariableIndex { index: usize, n: usize },
    #[error("coefficient {0} is not an element of the base field")]
    CoefficientNotInField(String),

    #[error("budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),
    #[error("variety is not smooth of the claimed dimension: {0}")]
    XNotValidated(String),
    #[error("the section is not singular at the given point")]
    NotSingularHere,
    #[error("unsupported variety: {0}")]
    UnsupportedX(String),
    #[error("zeta product diverges: s = {s} but the dimension is {dim}")]
    Divergent { s: u32, dim: usize },
    #[error("jet points are not distinct")]
    PointsNotDistinct,
    #[error("jet map is not surjective: rank {rank} < {expected}")]
    NotSurjective { rank: usize, expected: usize },
    #[error("the jet set T is empty")]
    EmptyT,
    #[error("point degree {e} exceeds d/(m+1) = {d}/{m_plus_1}; rank-based fraction is {rank_fraction}")]
    DegreeTooLarge {
        e: u32,
        d: u32,
        m_plus_1: usize,
        rank_fraction: String,
    },
    #[error("inconsistent conditions: {0}")]
    InconsistentConditions(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub(crate) fn budget(needed: impl ToString, budget: u64) -> Self {
        Error::BudgetExceeded {
            needed: needed.to_string(),
            budget,
        }
    }
}
