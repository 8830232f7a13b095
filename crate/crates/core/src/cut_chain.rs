//! Maximal chains of minimum s-t cuts.
//!
//! A minimum cut is a node set containing `s`, excluding `t`, that no
//! residual arc leaves. The chain starts at the residual closure of `s`,
//! then grows by one residual strongly connected component at a time, and
//! ends just before the nodes that can still reach `t`.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::conditioning::ReducedView;
use crate::error::{Error, Result};
use crate::graph::{residual_out, residual_scc_condensation, EdgeId, FlowResult, NodeId};
use crate::network::CodingNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CutKind {
    /// Two crossing edges, both of capacity 2.
    TwoEdge,
    /// Three crossing edges, all of capacity 1.
    ThreeArc,
}

/// A strictly nested sequence of minimum cuts `C_0 ⊂ C_1 ⊂ ... ⊂ C_{k-1}`.
///
/// Cuts are stored implicitly: `position[v]` is the index of the first cut
/// containing `v`, or `k` if none does. Region `r` is the set of nodes with
/// position `r`, so region 0 is the first cut and region `k` holds `t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutChain {
    pub position: Vec<usize>,
    /// Edges leaving each cut, in ascending id order.
    pub crossing: Vec<Vec<EdgeId>>,
    pub kinds: Vec<CutKind>,
}

impl CutChain {
    /// Number of cuts.
    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn contains(&self, cut: usize, v: NodeId) -> bool {
        self.position[v.index()] <= cut
    }

    /// Members of cut `i` in ascending id order.
    pub fn cut(&self, i: usize) -> Vec<NodeId> {
        self.nodes_where(|p| p <= i)
    }

    /// Nodes of region `r`, i.e. `C_r \ C_{r-1}`, with region `k` being the
    /// complement of the last cut.
    pub fn region(&self, r: usize) -> Vec<NodeId> {
        self.nodes_where(|p| p == r)
    }

    fn nodes_where(&self, pred: impl Fn(usize) -> bool) -> Vec<NodeId> {
        (0..self.position.len())
            .filter(|&v| pred(self.position[v]))
            .map(|v| NodeId(v as u32))
            .collect()
    }
}

/// Classifies a crossing-capacity multiset.
pub fn kind_of_crossing(capacities: &[u8]) -> Result<CutKind> {
    match capacities {
        [2, 2] => Ok(CutKind::TwoEdge),
        [1, 1, 1] => Ok(CutKind::ThreeArc),
        _ => Err(Error::MalformedCut {
            crossing: capacities.to_vec(),
        }),
    }
}

/// Classifies the cut given as a membership mask.
pub fn classify_cut(cn: &CodingNetwork, cut: &[bool]) -> Result<CutKind> {
    let caps: Vec<u8> = cn
        .graph
        .edges()
        .filter(|&e| {
            let (u, v) = cn.graph.endpoints(e);
            cut[u.index()] && !cut[v.index()]
        })
        .map(|e| cn.c(e))
        .collect();
    kind_of_crossing(&caps)
}

/// Builds a maximal chain from a maximum reduced flow.
///
/// Middle components are added once all their residual successors are in;
/// among eligible components the one holding the smallest node id goes
/// first. Each prefix is checked for closure and for crossing capacity
/// equal to the flow value, both incrementally.
pub fn build_cut_chain(cn: &CodingNetwork, flow: &FlowResult) -> Result<CutChain> {
    let g = &cn.graph;
    let cap = ReducedView::of(cn).capacity;
    let f = &flow.flow;
    let dag = residual_scc_condensation(g, &cap, flow, cn.source, cn.target)?;
    let ncomp = dag.len();
    let cs = dag.component_of[cn.source.index()];
    let ct = dag.component_of[cn.target.index()];

    // Components reachable from s and components reaching t.
    let mut succ: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); ncomp];
    for v in g.nodes() {
        let a = dag.component_of[v.index()];
        for (_, _, w) in residual_out(g, &cap, f, v) {
            let b = dag.component_of[w.index()];
            if a != b {
                succ[a].push(b);
                pred[b].push(a);
            }
        }
    }
    let mut in_source = vec![false; ncomp];
    let mut stack = vec![cs];
    in_source[cs] = true;
    while let Some(a) = stack.pop() {
        for &b in &succ[a] {
            if !in_source[b] {
                in_source[b] = true;
                stack.push(b);
            }
        }
    }
    let mut in_target = vec![false; ncomp];
    let mut stack = vec![ct];
    in_target[ct] = true;
    while let Some(b) = stack.pop() {
        for &a in &pred[b] {
            if !in_target[a] {
                in_target[a] = true;
                stack.push(a);
            }
        }
    }
    let middle = |a: usize| !in_source[a] && !in_target[a];

    // Reverse Kahn order over middle components.
    let mut pending = vec![0usize; ncomp];
    for a in 0..ncomp {
        if middle(a) {
            pending[a] = succ[a].iter().filter(|&&b| middle(b)).count();
        }
    }
    let key = |a: usize| dag.components[a][0];
    let mut heap: BinaryHeap<Reverse<(NodeId, usize)>> = (0..ncomp)
        .filter(|&a| middle(a) && pending[a] == 0)
        .map(|a| Reverse((key(a), a)))
        .collect();
    let mut order = Vec::new();
    while let Some(Reverse((_, a))) = heap.pop() {
        order.push(a);
        for &b in &pred[a] {
            if middle(b) {
                pending[b] -= 1;
                if pending[b] == 0 {
                    heap.push(Reverse((key(b), b)));
                }
            }
        }
    }
    let middle_count = (0..ncomp).filter(|&a| middle(a)).count();
    if order.len() != middle_count {
        return Err(Error::Invariant("residual condensation has a cycle".into()));
    }

    let k = order.len() + 1;
    let mut position = vec![k; g.node_count()];
    for v in g.nodes() {
        if in_source[dag.component_of[v.index()]] {
            position[v.index()] = 0;
        }
    }
    for (j, &a) in order.iter().enumerate() {
        for &v in &dag.components[a] {
            position[v.index()] = j + 1;
        }
    }

    let mut crossing_now: Vec<EdgeId> = g
        .edges()
        .filter(|&e| position[g.tail(e).index()] == 0 && position[g.head(e).index()] > 0)
        .collect();
    let mut crossing = Vec::with_capacity(k);
    let mut kinds = Vec::with_capacity(k);
    for j in 0..k {
        if j > 0 {
            let comp = &dag.components[order[j - 1]];
            for &v in comp {
                for (_, _, w) in residual_out(g, &cap, f, v) {
                    if position[w.index()] > j {
                        return Err(Error::BrokenChain { cut: j });
                    }
                }
            }
            crossing_now.retain(|&e| position[g.head(e).index()] != j);
            for &v in comp {
                for &e in g.out_edges(v) {
                    if position[g.head(e).index()] > j {
                        crossing_now.push(e);
                    }
                }
            }
            crossing_now.sort();
        }
        let total: u32 = crossing_now.iter().map(|e| cap[e.index()]).sum();
        if total != flow.value {
            return Err(Error::BrokenChain { cut: j });
        }
        let caps: Vec<u8> = crossing_now.iter().map(|&e| cn.c(e)).collect();
        kinds.push(kind_of_crossing(&caps)?);
        crossing.push(crossing_now.clone());
    }
    Ok(CutChain {
        position,
        crossing,
        kinds,
    })
}
