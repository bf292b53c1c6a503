use num_bigint::BigInt;
use thiserror::Error;

use crate::arith::ArithError;
use crate::tree_model::TreeError;
use crate::words::WordError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("{0} is not prime")]
    NotPrime(BigInt),
    #[error("{value} is not a power of {prime}")]
    NotPrimePower { value: BigInt, prime: BigInt },
    #[error("edge {0}: label does not divide the vertex order, or the two sides disagree on the edge group order")]
    InconsistentEdge(usize),
    #[error("tree has no edges")]
    NoEdges,
    #[error("factor {0} has a free abelian part; only finite factors are supported")]
    UnsupportedFreePart(usize),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("{divisor} does not divide {value}")]
    NotDivisible { value: BigInt, divisor: BigInt },
}
