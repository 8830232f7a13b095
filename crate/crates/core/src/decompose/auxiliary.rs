use serde::{Deserialize, Serialize};

use crate::graph::{Digraph, EdgeId};
use crate::network::CodingNetwork;

/// One parallel copy of a network edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuxArc {
    pub edge: EdgeId,
    pub copy: u8,
}

/// The network with each edge `e` replaced by `c(e)` parallel arcs.
///
/// Arc ids of `graph` index `arcs`. Copies of one edge are adjacent, copy 0
/// first, so arc ids sort the same way as `(edge, copy)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub graph: Digraph,
    pub arcs: Vec<AuxArc>,
    first: Vec<u32>,
}

impl AuxiliaryGraph {
    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arc id of copy `copy` of `edge`, if that copy exists.
    pub fn arc_id(&self, edge: EdgeId, copy: u8) -> Option<EdgeId> {
        let lo = self.first[edge.index()];
        let hi = self.first[edge.index() + 1];
        let id = lo + copy as u32;
        (id < hi).then_some(EdgeId(id))
    }

    /// All arc ids of `edge`.
    pub fn arcs_of(&self, edge: EdgeId) -> impl Iterator<Item = EdgeId> {
        (self.first[edge.index()]..self.first[edge.index() + 1]).map(EdgeId)
    }

    pub fn arc(&self, id: EdgeId) -> AuxArc {
        self.arcs[id.index()]
    }
}

pub fn build_auxiliary(cn: &CodingNetwork) -> AuxiliaryGraph {
    let mut graph = Digraph::with_nodes(cn.graph.node_count());
    let mut arcs = Vec::with_capacity(cn.total_arcs());
    let mut first = Vec::with_capacity(cn.graph.edge_count() + 1);
    for e in cn.graph.edges() {
        first.push(arcs.len() as u32);
        let (u, v) = cn.graph.endpoints(e);
        for copy in 0..cn.c(e) {
            graph.add_edge(u, v).expect("edge of a valid graph");
            arcs.push(AuxArc { edge: e, copy });
        }
    }
    first.push(arcs.len() as u32);
    AuxiliaryGraph { graph, arcs, first }
}
