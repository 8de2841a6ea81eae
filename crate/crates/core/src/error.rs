use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown letter {0:?} for basis of rank {1}")]
    UnknownLetter(char, usize),
    #[error("rank {0} is outside the supported range 2..=26")]
    BadRank(usize),
    #[error("occurrence pattern must be nonempty")]
    EmptyPattern,
    #[error("images do not form a basis: {0}")]
    NotAnAutomorphism(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("search bound {bound} exceeded (best lower bound {lower})")]
    SearchBoundExceeded { bound: usize, lower: usize },
    #[error("invalid frequency table: {0}")]
    InvalidTable(String),
    #[error("terms outside the subgroup lamination: {0}")]
    OutsideSupport(String),
    #[error("table is not realizable by a single cyclic word: {0}")]
    NotRealizable(String),
    #[error("unsupported chart: {0}")]
    UnsupportedChart(String),
    #[error("splittings are not transverse: {0}")]
    NotTransverse(String),
    #[error("empty tree sample")]
    EmptySample,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
