//! Resilient flow decomposition: from a network to three labeled subflows
//! that survive any single edge failure.
//!
//! Instances with reduced max flow above 3 are served by three disjoint
//! paths. Instances with flow exactly 3 are conditioned, cut along a
//! maximal chain of minimum cuts, solved segment by segment and glued.

mod auxiliary;
mod glue;
mod plan;
mod segment;
mod solve;

pub use auxiliary::{build_auxiliary, AuxArc, AuxiliaryGraph};
pub use glue::{glue_segments, GluedSets};
pub use plan::{assign_roles, Label, NodeRole, RecoveryPlan, Role};
pub use segment::{extract_segments, ArcRef, Boundary, Segment, SegmentType};
pub use solve::{locally_feasible, solve_segment, SegmentSolution};

use crate::conditioning::{
    classify_feasibility, condition_network, derive_coding_capacities, Feasibility, FeasibilityClass,
};
use crate::cut_chain::CutKind;
use crate::error::{Error, Result};
use crate::graph::edge_disjoint_paths;
use crate::network::{CodingNetwork, Network};
use crate::verify::certify_plan;

/// What the NETWORK_CODING path saw on its way to the plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub cut_kinds: Vec<CutKind>,
    pub segment_types: Vec<SegmentType>,
    pub removed_edges: usize,
    pub demoted_edges: usize,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The coding network the plan's arcs refer to.
    pub coding: CodingNetwork,
    pub feasibility: Feasibility,
    pub plan: RecoveryPlan,
    pub trace: Option<Trace>,
}

pub fn decompose(net: &Network) -> Result<Decomposition> {
    decompose_coding(derive_coding_capacities(net))
}

/// Decomposes a coding network. Every returned plan has passed
/// [`certify_plan`].
pub fn decompose_coding(cn: CodingNetwork) -> Result<Decomposition> {
    let feasibility = classify_feasibility(&cn)?;
    let (plan, trace) = match feasibility.class {
        FeasibilityClass::DiversityCoding => {
            let paths = edge_disjoint_paths(&cn.graph, cn.source, cn.target, 3)?;
            let sets = [0, 1, 2].map(|i| paths[i].iter().map(|&edge| AuxArc { edge, copy: 0 }).collect());
            (assign_roles(&cn, sets, None, feasibility.class), None)
        }
        FeasibilityClass::NetworkCoding => {
            let cond = condition_network(&cn)?;
            let aux = build_auxiliary(&cond.network);
            let segments = extract_segments(&cond.network, &cond.chain, &aux)?;
            let solutions = segments.iter().map(solve_segment).collect::<Result<Vec<_>>>()?;
            let glued = glue_segments(&segments, &solutions, &cond.chain, &aux)?;
            let sets = glued.sets.map(|set| {
                set.into_iter()
                    .map(|a| AuxArc {
                        edge: cond.parent[a.edge.index()],
                        copy: a.copy,
                    })
                    .collect()
            });
            let trace = Trace {
                cut_kinds: cond.chain.kinds.clone(),
                segment_types: segments.iter().map(|s| s.segment_type).collect(),
                removed_edges: cn.graph.edge_count() - cond.network.graph.edge_count(),
                demoted_edges: cond.demoted.len(),
            };
            (
                assign_roles(&cn, sets, glued.dominant, feasibility.class),
                Some(trace),
            )
        }
        class => return Err(Error::Unprotectable(class)),
    };
    let report = certify_plan(&cn, &plan);
    if !report.overall {
        return Err(Error::Invariant(format!(
            "decomposition failed certification: {:?}",
            report.violations
        )));
    }
    Ok(Decomposition {
        coding: cn,
        feasibility,
        plan,
        trace,
    })
}
