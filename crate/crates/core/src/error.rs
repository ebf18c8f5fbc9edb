use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid box k={k}, n={n}: need 1 <= k < n")]
    InvalidBox { k: i64, n: i64 },

    #[error("diagram {parts:?} does not fit the {k}x{width} box")]
    InvalidDiagram { parts: Vec<i64>, k: usize, width: usize },

    #[error("weight {0:?} is not weakly decreasing")]
    NotDominant(Vec<i64>),

    #[error("weights have {left} and {right} entries")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension of a {k}-entry weight requested in GL({m})")]
    RankTooSmall { k: usize, m: usize },

    #[error("cannot pad weight {0:?} with zeros: last entry is negative")]
    NegativePadding(Vec<i64>),

    #[error("objects live on different Grassmannians")]
    BoxMismatch,

    #[error("{0:?} is not a short minimal upper triangular diagram")]
    NotShort(Vec<usize>),

    #[error("projector list is not unitriangular at ({row}, {col})")]
    NotUnitriangular { row: usize, col: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("internal invariant broken: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
