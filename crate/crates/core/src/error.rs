use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid preference system: {0}")]
    InvalidSystem(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("edge set is not a matching: {0}")]
    NotAMatching(String),
    #[error("matching is not stable")]
    NotStable,
    #[error("node set is not a nontrivial member of the ring")]
    NotRingMember,
    #[error("no finite cut separates source and sink")]
    Unbounded,
    #[error("no cut family of size {ell} with finite capacity exists (potential stalled at {reached})")]
    NoFiniteLCut { ell: usize, reached: usize },
    #[error("only {available} pairwise disjoint members exist, {requested} requested")]
    InsufficientDisjoint {
        requested: usize,
        available: usize,
        /// Elements (edges or poset elements) meeting every member; its size is `available`.
        blocker: Vec<usize>,
    },
    #[error("no stable matching satisfies the constraints")]
    Infeasible,
    #[error("invalid level assignment: {0}")]
    InvalidLevels(String),
    #[error("poset is not D-antichain-extendible")]
    NotExtendible,
    #[error("resource bound exceeded: {what} is {actual}, limit {limit}")]
    ResourceBound {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("arithmetic overflow")]
    Overflow,
    #[error("relaxation optimum {lower_bound} is not attained by a disjoint family")]
    RelaxationGap { lower_bound: String },
}
