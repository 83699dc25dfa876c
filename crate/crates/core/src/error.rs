use crate::graph::Vertex;

/// Errors raised by the bowtie-free graph operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("graph is not special: vertex {vertex} lies in neither a K4 nor a chimney")]
    NotSpecial { vertex: Vertex },

    #[error("graph contains a bowtie centred at vertex {}: {:?}", .witness[0], .witness)]
    ContainsBowtie { witness: [Vertex; 5] },

    #[error("partial automorphism cannot be extended block-wise at vertex {vertex}")]
    NotExtendable { vertex: Vertex },

    #[error("witness arity must be at least 3, got {k}")]
    InvalidK { k: usize },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("internal construction check failed: {0}")]
    InternalClaimViolated(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
}

impl Error {
    /// Domain errors describe a property of valid input (as opposed to malformed input).
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NotSpecial { .. }
                | Error::ContainsBowtie { .. }
                | Error::NotExtendable { .. }
                | Error::InvalidK { .. }
                | Error::PreconditionFailed(_)
                | Error::InternalClaimViolated(_)
        )
    }

    /// Stable machine-readable name used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotSpecial { .. } => "NotSpecial",
            Error::ContainsBowtie { .. } => "ContainsBowtie",
            Error::NotExtendable { .. } => "NotExtendable",
            Error::InvalidK { .. } => "InvalidK",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::InternalClaimViolated(_) => "InternalClaimViolated",
            Error::InvalidGraph(_) => "InvalidGraph",
            Error::InvalidMap(_) => "InvalidMap",
            Error::UnknownVertex(_) => "UnknownVertex",
        }
    }

    /// Witness vertices attached to the error, if any.
    pub fn witness(&self) -> Vec<Vertex> {
        match self {
            Error::NotSpecial { vertex } | Error::NotExtendable { vertex } => vec![*vertex],
            Error::ContainsBowtie { witness } => witness.to_vec(),
            Error::UnknownVertex(v) => vec![*v],
            _ => Vec::new(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
