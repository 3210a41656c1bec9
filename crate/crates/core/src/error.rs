use thiserror::Error;

/// Errors raised by group construction and the structural algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generators have mismatched degrees ({expected} vs {found})")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("group closure exceeded the order cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("element is not a member of {group}")]
    NotAMember { group: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator images for {0} do not define an automorphism")]
    NotAnAutomorphism(String),
    #[error("action does not extend to a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("subgroup is not normal in {group}")]
    NotNormal { group: String },
    #[error("not a subgroup of {group}")]
    NotASubgroup { group: String },
    #[error("normal subgroup lattice exceeded {cap} members")]
    LatticeCapExceeded { cap: usize },
    #[error("isomorphism test refused: order {order} exceeds cap {cap}")]
    IsoCapExceeded { order: usize, cap: usize },
    #[error("Hall subgroup search exhausted after {restarts} restarts")]
    HallSearchExhausted { restarts: usize },
    #[error("Frobenius kernel found but no complement located")]
    ComplementSearchExhausted,
    #[error("graph has no vertices")]
    NoVertices,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no case of the classification matches: {0}")]
    NoCaseMatches(String),
    #[error("line {line}, column {column}: {reason}")]
    SyntaxError {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("line {line}: duplicate group name {name:?}")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: bad cycle {cycle:?}: {reason}")]
    BadCycle {
        line: usize,
        cycle: String,
        reason: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
