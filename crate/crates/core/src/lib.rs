//! Resilient flow decomposition for unicast connections.
//!
//! Given a directed network with free edge capacities, this crate decides
//! whether a connection from `s` to `t` can be protected against any single
//! edge failure by sending data parts A, B and A xor B on three arc-disjoint
//! subflows, and if so constructs those subflows. Relays only duplicate or
//! select packets; all coding happens at the endpoints.
//!
//! ```
//! use rfd_core::{decompose, fixtures, verify_plan, FeasibilityClass};
//!
//! let d = decompose(&fixtures::fig1()).unwrap();
//! assert_eq!(d.feasibility.class, FeasibilityClass::NetworkCoding);
//! assert!(verify_plan(&d.coding, &d.plan).overall);
//! ```

pub mod conditioning;
pub mod cut_chain;
pub mod decompose;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod netgen;
pub mod network;
pub mod simulate;
pub mod verify;

pub use conditioning::{
    classify_feasibility, condition_network, derive_coding_capacities, ConditionedNetwork, Feasibility,
    FeasibilityClass, ReducedView,
};
pub use cut_chain::{build_cut_chain, classify_cut, CutChain, CutKind};
pub use decompose::{
    decompose, decompose_coding, AuxArc, Decomposition, Label, NodeRole, RecoveryPlan, Role, SegmentType,
};
pub use error::{Error, Result};
pub use graph::{Digraph, EdgeId, FlowResult, NodeId};
pub use netgen::{generate, GenParams, Structure};
pub use network::{CodingNetwork, Names, Network, NetworkBuilder};
pub use simulate::{decode, encode, DeliveryOutcome, Generation, Simulator};
pub use verify::{
    brute_force_decomposition_exists, brute_force_feasible, certify_plan, verify_plan, VerificationReport,
    Violation,
};
