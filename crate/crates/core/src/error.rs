use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain size mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("image sequence is not a permutation")]
    NotAPermutation,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("coset representatives exceeded the index bound {bound}")]
    IndexBoundExceeded { bound: u128 },
    #[error("subdomain is not invariant under generator {generator}")]
    NonInvariantSubdomain { generator: usize },
    #[error("permutation does not stabilize the subfamily")]
    NonStabilizedSubfamily,
    #[error("invalid set family: {0}")]
    InvalidFamily(String),
    #[error("tower step found no failing subfamily although a generator is not Venn-good")]
    TowerStalled,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is not chordal")]
    NotChordal,
    #[error("graph is not an interval graph: {0}")]
    NotInterval(String),
    #[error("marked set {set:?} of color {color} does not induce a clique")]
    MarkedSetNotClique { color: usize, set: Vec<usize> },
    #[error("brute-force budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    /// Errors that indicate a violated internal bound (a bug signal).
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::IndexBoundExceeded { .. } | Error::TowerStalled)
    }

    /// Errors caused by an input that violates a problem precondition.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotInterval(_)
                | Error::NotChordal
                | Error::MarkedSetNotClique { .. }
                | Error::EmptyGraph
                | Error::InvalidGraph(_)
                | Error::InvalidFamily(_)
                | Error::InvalidPartition(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
