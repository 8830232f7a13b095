use serde::{Deserialize, Serialize};

use crate::cut_chain::{CutChain, CutKind};
use crate::decompose::auxiliary::AuxiliaryGraph;
use crate::error::{Error, Result};
use crate::graph::{Digraph, EdgeId, NodeId};
use crate::network::CodingNetwork;

/// A segment arc: a copy of a network edge, or one of the three stand-in
/// arcs that give an end segment a 3-arc boundary at `s` or `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArcRef {
    Aux(EdgeId),
    Virtual(u8),
}

impl ArcRef {
    pub fn aux(self) -> Option<EdgeId> {
        match self {
            ArcRef::Aux(a) => Some(a),
            ArcRef::Virtual(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SegmentType {
    /// 3-arc-cut on both sides.
    I,
    /// 2-edge-cut on both sides.
    II,
    /// 2-edge-cut in, 3-arc-cut out.
    III,
    /// 3-arc-cut in, 2-edge-cut out.
    IV,
}

impl SegmentType {
    pub fn of(entry: CutKind, exit: CutKind) -> SegmentType {
        match (entry, exit) {
            (CutKind::ThreeArc, CutKind::ThreeArc) => SegmentType::I,
            (CutKind::TwoEdge, CutKind::TwoEdge) => SegmentType::II,
            (CutKind::TwoEdge, CutKind::ThreeArc) => SegmentType::III,
            (CutKind::ThreeArc, CutKind::TwoEdge) => SegmentType::IV,
        }
    }
}

/// A bounding cut of a segment. `cut` is `None` for the stand-in boundary
/// at `s` or `t`, which always behaves as a 3-arc-cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundary {
    pub cut: Option<usize>,
    pub kind: CutKind,
}

/// The part of the auxiliary graph between two consecutive chain cuts.
///
/// Local node 0 is the synthetic source `s_i`, node 1 the synthetic sink
/// `t_i`, and node `2 + j` is `interior[j]`. Local edge `i` of `graph` is
/// the arc `arcs[i]`; `edge_of[i]` is its network edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub region: usize,
    pub entry: Boundary,
    pub exit: Boundary,
    pub segment_type: SegmentType,
    pub interior: Vec<NodeId>,
    pub graph: Digraph,
    pub arcs: Vec<ArcRef>,
    pub edge_of: Vec<Option<EdgeId>>,
}

impl Segment {
    pub const SOURCE: NodeId = NodeId(0);
    pub const SINK: NodeId = NodeId(1);

    /// The network node behind a local interior node.
    pub fn global(&self, local: NodeId) -> Option<NodeId> {
        local.index().checked_sub(2).map(|j| self.interior[j])
    }
}

/// Cuts the conditioned network into segments along `chain`.
///
/// Regions strictly between two cuts always give a segment. The region
/// before the first cut gives one when it holds more than `s`, and the
/// region after the last cut when it holds more than `t`; a chain of one
/// cut with bare terminals on both sides gets the first end segment.
pub fn extract_segments(cn: &CodingNetwork, chain: &CutChain, aux: &AuxiliaryGraph) -> Result<Vec<Segment>> {
    let g = &cn.graph;
    let k = chain.len();
    let pos = &chain.position;
    let mut regions: Vec<Vec<NodeId>> = vec![Vec::new(); k + 1];
    let mut local = vec![NodeId(0); g.node_count()];
    for v in g.nodes() {
        let r = &mut regions[pos[v.index()]];
        local[v.index()] = NodeId(2 + r.len() as u32);
        r.push(v);
    }
    let mut interior_edges: Vec<Vec<EdgeId>> = vec![Vec::new(); k + 1];
    for e in g.edges() {
        let (pu, pv) = (pos[g.tail(e).index()], pos[g.head(e).index()]);
        if pu > pv {
            return Err(Error::Invariant(format!(
                "edge {e} runs backward across the chain"
            )));
        }
        if pu == pv {
            if cn.c(e) == 2 {
                return Err(Error::Invariant(format!(
                    "capacity-2 edge {e} inside region {pu}"
                )));
            }
            interior_edges[pu].push(e);
        }
    }

    let mut has_first = regions[0].len() > 1;
    let has_last = regions[k].len() > 1;
    if k == 1 && !has_first && !has_last {
        has_first = true;
    }
    let lo = if has_first { 0 } else { 1 };
    let hi = if has_last { k } else { k - 1 };

    let mut segments = Vec::new();
    for r in lo..=hi {
        let entry = if r == 0 {
            Boundary {
                cut: None,
                kind: CutKind::ThreeArc,
            }
        } else {
            Boundary {
                cut: Some(r - 1),
                kind: chain.kinds[r - 1],
            }
        };
        let exit = if r == k {
            Boundary {
                cut: None,
                kind: CutKind::ThreeArc,
            }
        } else {
            Boundary {
                cut: Some(r),
                kind: chain.kinds[r],
            }
        };

        let mut arcs: Vec<(ArcRef, NodeId, NodeId, Option<EdgeId>)> = Vec::new();
        let place = |v: NodeId| {
            if pos[v.index()] == r {
                local[v.index()]
            } else {
                Segment::SINK
            }
        };
        if r == 0 {
            let s = local[cn.source.index()];
            arcs.extend((0..3).map(|i| (ArcRef::Virtual(i), Segment::SOURCE, s, None)));
        } else {
            for &e in &chain.crossing[r - 1] {
                for a in aux.arcs_of(e) {
                    arcs.push((ArcRef::Aux(a), Segment::SOURCE, place(g.head(e)), Some(e)));
                }
            }
        }
        for &e in &interior_edges[r] {
            let (u, v) = g.endpoints(e);
            for a in aux.arcs_of(e) {
                arcs.push((ArcRef::Aux(a), local[u.index()], local[v.index()], Some(e)));
            }
        }
        if r == k {
            let t = local[cn.target.index()];
            arcs.extend((0..3).map(|i| (ArcRef::Virtual(i), t, Segment::SINK, None)));
        } else {
            for &e in &chain.crossing[r] {
                if pos[g.tail(e).index()] == r {
                    for a in aux.arcs_of(e) {
                        arcs.push((ArcRef::Aux(a), local[g.tail(e).index()], Segment::SINK, Some(e)));
                    }
                }
            }
        }
        arcs.sort_by_key(|a| a.0);

        let interior = regions[r].clone();
        let mut graph = Digraph::with_nodes(2 + interior.len());
        for &(_, u, v, _) in &arcs {
            graph.add_edge(u, v)?;
        }
        segments.push(Segment {
            region: r,
            entry,
            exit,
            segment_type: SegmentType::of(entry.kind, exit.kind),
            interior,
            graph,
            arcs: arcs.iter().map(|a| a.0).collect(),
            edge_of: arcs.iter().map(|a| a.3).collect(),
        });
    }
    Ok(segments)
}
