use thiserror::Error;

/// Errors raised by the permutation tree.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("duplicate element {0}")]
    Duplicate(u32),
    #[error("position range {lo}..={hi} invalid for a tree of {len} elements")]
    Range { lo: usize, hi: usize, len: usize },
    #[error("cut points ({i}, {j}, {k}) do not delimit two nonempty adjacent segments of {len} elements")]
    Cuts { i: usize, j: usize, k: usize, len: usize },
    #[error("value {0} is not stored in this tree")]
    NotFound(u32),
    #[error("tree invariant violated: {0}")]
    Invariant(String),
}

/// Errors raised while reading or manipulating permutations and their graphs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("not a permutation: {0}")]
    Invalid(String),
    #[error("transposition ({i}, {j}, {k}) invalid for {len} elements")]
    BadTransposition { i: usize, j: usize, k: usize, len: usize },
    #[error("black edges {0:?} must be distinct")]
    DuplicateEdges(Vec<usize>),
    #[error("black edge {edge} out of range (0..={max})")]
    EdgeRange { edge: usize, max: usize },
    #[error("contract violated: {0}")]
    Contract(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Errors raised by the exact-distance oracle.
#[derive(Debug, Error)]
pub enum OracleError {
    #[error("exact tables are limited to 2 <= n <= {max}, got {n}")]
    Size { n: usize, max: usize },
    #[error("permutation of length {got} looked up in a table for n = {n}")]
    Lookup { got: usize, n: usize },
    #[error("table cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Perm(#[from] PermError),
}
