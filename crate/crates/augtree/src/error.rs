use std::io;

use thiserror::Error;

/// Errors produced while reading or writing the DOAT instance format.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed header: {0}")]
    Header(String),
    #[error("edge count: expected {expected} tree edges, found {found}")]
    EdgeCount { expected: usize, found: usize },
    #[error("non-integer cost: {0}")]
    Cost(String),
    #[error("cost budget overflow: total edge cost must stay below 2^62")]
    Overflow,
    #[error("malformed oracle block: {0}")]
    OracleBlock(String),
    #[error("bad generator parameters: {0}")]
    Params(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("level ancestor out of range: requested {requested} hops above a vertex of depth {depth}")]
    LevelOutOfRange { requested: u32, depth: u32 },
    #[error("path vertex index {index} out of range 1..={len}")]
    PathIndexOutOfRange { index: usize, len: usize },
    #[error("link would join vertices already in one component")]
    LinkWithinComponent,
    #[error("linked vertex {0} is not a component root")]
    LinkNotRoot(usize),
    #[error("cut of absent edge ({0}, {1})")]
    CutAbsentEdge(usize, usize),
    #[error("forest vertex error: {0}")]
    ForestVertex(&'static str),
    #[error("edge ({0}, {1}) is not an edge of the base tree")]
    NotBaseEdge(usize, usize),
    #[error("vertex {0} already carries a pendant")]
    PendantOccupied(usize),
    #[error("no pendant with id {0}")]
    PendantMissing(usize),
    #[error("tree is not binary: vertex {0} has more than two children")]
    NotBinary(usize),
    #[error("tree is not a path")]
    NotAPath,
    #[error("vertex {0} is already a terminal")]
    AlreadyTerminal(usize),
    #[error("vertex {0} is not a terminal")]
    NotTerminal(usize),
    #[error("no terminal vertices")]
    EmptyTerminals,
    #[error("rollback token is not the most recent checkpoint")]
    NonLifoRollback,
    #[error("estimated work {estimate} exceeds budget {budget}")]
    WorkBoundExceeded { estimate: u128, budget: u64 },
    #[error("h = {h} exceeds vertex count {n}")]
    TooManyPicks { h: usize, n: usize },
    #[error("reduced vertex budget eta = {eta} exceeds n = {n}")]
    EtaExceedsN { eta: usize, n: usize },
    #[error("invalid solver input: {0}")]
    Solver(String),
    #[error("invalid lower-bound parameters: {0}")]
    LowerBound(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
