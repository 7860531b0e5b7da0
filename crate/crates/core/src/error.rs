use thiserror::Error;

use crate::series::Elem;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("no primitive {q}-th root of unity in F_{p}: {q} does not divide {p} - 1")]
    NoPrimitiveRoot { p: u64, q: u64 },

    #[error("zero is not allowed here")]
    ZeroInput,

    #[error("domain mismatch: {left} vs {right}")]
    DomainMismatch { left: String, right: String },

    #[error("valuation below precision unknown")]
    ValuationUnknown,

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("exponent {exponent} is not in the value group {group}")]
    NotInValueGroup { exponent: String, group: String },

    #[error("{value} is not a {q}-th power in the residue field")]
    NotQthPower { value: String, q: u64 },

    #[error("q = {0} equals the characteristic of the field")]
    CharacteristicEqualsQ(u64),

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    #[error("unsupported q = {0} (exhaustive enumeration needs q in {{2, 3, 5, 7}})")]
    UnsupportedQ(u64),

    #[error("index {index} out of range 0..{bound}")]
    OutOfRange { index: usize, bound: usize },

    #[error("norm has nonvanishing u-coordinate {index}: {value}")]
    NormNotInBase { index: usize, value: String },

    #[error("singular system; kernel vector found")]
    Singular { kernel: Vec<Elem> },

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("invalid Kummer context: {0}")]
    InvalidContext(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
