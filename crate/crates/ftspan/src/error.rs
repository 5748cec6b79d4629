use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Two distinct paths with the same endpoints tied on (hops, perturbation
    /// sum). The tie-breaking weights failed for this seed; retry with seed+1.
    #[error("perturbation tie: two distinct equal-weight paths detected")]
    PerturbationTie,

    #[error("vertex {0} is outside the tree")]
    VertexOutsideTree(usize),

    #[error("edge ({0},{1}) is not in the host graph")]
    EdgeNotInGraph(usize, usize),

    #[error("heavy vertex {0} has fewer than two neighbors and cannot be double-covered")]
    Uncoverable(usize),

    #[error("vertex {0} is not clustered")]
    Unclustered(usize),

    /// A missing edge endpoint turned out to be unclustered. The clustering
    /// graph guarantees this never happens on a correct build.
    #[error("clustering violation: missing-edge endpoint {0} is unclustered")]
    ClusteringViolation(usize),

    #[error("not a subgraph: edge ({0},{1}) is absent from the host graph")]
    NotASubgraph(usize, usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("infeasible model: {0}")]
    InfeasibleModel(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("bad config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
