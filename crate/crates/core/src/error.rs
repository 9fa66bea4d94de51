use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("group has {order} elements, above the cap of {cap}")]
    CapExceeded { order: u128, cap: u128 },
    #[error("search budget of {budget} nodes exceeded ({detail})")]
    SearchBudgetExceeded { budget: u64, detail: String },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("not a p-group: order {order} has a prime factor other than {p}")]
    NotAPGroup { order: u128, p: u64 },
    #[error("invalid connection set: {0}")]
    InvalidConnectionSet(String),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("graph has {n} vertices, above the automorphism-search bound of {bound}")]
    BoundExceeded { n: usize, bound: usize },
    #[error("group is not transitive")]
    Intransitive,
    #[error("inputs are not automorphisms: {0}")]
    NotAutomorphisms(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no witness found: {0}")]
    NotFound(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("group order overflows 128 bits")]
    OrderOverflow,
}

pub type Result<T> = std::result::Result<T, Error>;
