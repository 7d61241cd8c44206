use thiserror::Error;

use crate::curves::Slope;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("not a primitive slope: ({p}, {q})")]
    NotPrimitive { p: i64, q: i64 },

    #[error("slopes {0} and {1} do not form a basis (intersection number {2})")]
    NotUnimodular(Slope, Slope, u64),

    #[error("slopes {0} and {1} are disjoint")]
    Disjoint(Slope, Slope),

    #[error("slopes {0} and {1} have identical trace polynomials")]
    SameOrbit(Slope, Slope),

    #[error("no sign change found for the equal-length function within |theta| <= {cap}")]
    BracketNotFound { cap: f64 },

    #[error("locus leaf with trace {grid_value} failed: {source}")]
    LeafFailure {
        grid_value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("enumeration reached the depth cap of {0} before the trace bound was exhausted")]
    DepthCap(usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
