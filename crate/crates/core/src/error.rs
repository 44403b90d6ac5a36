use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported Cartan type {0}")]
    UnsupportedType(String),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("weight {weight:?} has length {got}, expected {expected}")]
    WeightLength {
        weight: Vec<i64>,
        got: usize,
        expected: usize,
    },

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("level must be at least {min}, got {got}")]
    Level { min: i64, got: i64 },

    #[error("weight {weight:?} has level {got}, expected {expected}")]
    LevelMismatch {
        weight: Vec<i64>,
        got: i64,
        expected: i64,
    },

    #[error("inexact division: offending term {term:?} ({reason})")]
    InexactDivision { term: Vec<i64>, reason: String },

    #[error("data inconsistency: {0}")]
    DataInconsistency(String),

    #[error("no branching data for {0}")]
    MissingBranching(String),

    #[error("S-matrix refused: |W0| = {order} exceeds the bound {bound}")]
    SMatrixGate { order: u128, bound: u128 },

    #[error("numeric instability: Verlinde sum {raw} is {residual:e} away from an integer")]
    NumericInstability { raw: f64, residual: f64 },

    #[error("inadmissible height function: {0}")]
    Height(String),

    #[error("index {0} is not exchangeable")]
    NotExchangeable(usize),

    #[error("Laurent division is not exact")]
    LaurentDivision,

    #[error("not of finite cluster type: a seed has |b_ij b_ji| = {product} at ({i}, {j})")]
    InfiniteType { i: usize, j: usize, product: i64 },

    #[error("enumeration exceeded {what} bound {bound}")]
    LimitExceeded { what: &'static str, bound: usize },

    #[error("schema error in {source_name}: {message}")]
    Schema {
        source_name: String,
        message: String,
    },

    #[error("checksum mismatch in {0}")]
    Checksum(String),

    #[error("contradiction in relation {relation}: {message}")]
    Contradiction { relation: String, message: String },

    #[error("image sources disagree on variable {id}: {message}")]
    SourceDisagreement { id: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
