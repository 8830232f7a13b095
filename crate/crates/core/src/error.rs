use thiserror::Error;

use crate::conditioning::FeasibilityClass;
use crate::graph::{EdgeId, NodeId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0:?}")]
    UnknownEdge(EdgeId),
    #[error("self-loop on node {0:?}")]
    SelfLoop(NodeId),
    #[error("source and target are the same node")]
    SourceIsTarget,
    #[error("flow is not maximum: the residual graph still has an s-t path")]
    NotMaximum,
    #[error("only {found} arc-disjoint paths exist, {wanted} requested")]
    Insufficient { found: usize, wanted: usize },
    #[error("conditioning requires a NETWORK_CODING instance, got {0}")]
    NotNetworkCodingClass(FeasibilityClass),
    #[error("cut prefix {cut} of the chain has an outgoing residual arc")]
    BrokenChain { cut: usize },
    #[error("cut is neither a 2-edge-cut nor a 3-arc-cut (crossing capacities {crossing:?})")]
    MalformedCut { crossing: Vec<u8> },
    #[error("segment {segment} is infeasible: {reason}")]
    SegmentInfeasible { segment: usize, reason: String },
    #[error("cannot glue segment {segment} onto its predecessor: {reason}")]
    GlueMismatch { segment: usize, reason: String },
    #[error("connection cannot be protected (class {0})")]
    Unprotectable(FeasibilityClass),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("auxiliary graph has {arcs} arcs, exhaustive search supports at most {max}")]
    TooLarge { arcs: usize, max: usize },
    #[error("payload lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("at least two distinct labels are needed to decode, got {0}")]
    NotEnoughLabels(usize),
    #[error("plan failed verification")]
    UnverifiedPlan,
    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },
}
