use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("parse error at index {index}: {message}")]
    Parse { index: usize, message: String },

    #[error("generators {first} and {second} do not commute")]
    NonCommuting { first: usize, second: usize },

    #[error("generators are dependent: product of {combination:?} is proportional to the identity")]
    Dependent { combination: Vec<usize> },

    #[error("generator {index} carries a nonzero phase")]
    PhasedGenerator { index: usize },

    #[error("empty generator list")]
    Empty,

    #[error("H1 row {h1_row} and H2 row {h2_row} overlap with odd parity")]
    CssCondition { h1_row: usize, h2_row: usize },

    #[error("no correction supported on the erased positions matches the syndrome")]
    InfeasibleErasure,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {qubits} qubits (limit {limit})")]
    Capacity { qubits: usize, limit: usize },

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("forced measurement outcome has zero probability")]
    ZeroProbability,

    #[error("malformed circuit: {0}")]
    Circuit(String),

    #[error("no fit possible: {0}")]
    NoFit(String),

    #[error("concatenation diverges: p = {p} is not below p_t = {p_t}")]
    Diverges { p: f64, p_t: f64 },

    #[error("index {index} out of range for {n} qubits")]
    Index { index: usize, n: usize },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
