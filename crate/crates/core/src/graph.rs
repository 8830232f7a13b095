//! Directed multigraphs, bounded max-flow, residual condensation and
//! flow path decomposition.
//!
//! Flow quantities are plain integers. Callers working with half-unit
//! capacities (1 and 1.5) pass them doubled (2 and 3), so every comparison
//! in this module is exact.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// Orientation of an arc of the residual graph relative to its edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// A directed multigraph with dense node and edge ids.
///
/// Parallel edges are allowed; edges are told apart by id only. Every node
/// keeps its incident edges in ascending id order, which is what makes the
/// searches below deterministic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Digraph {
    tails: Vec<NodeId>,
    heads: Vec<NodeId>,
    out_edges: Vec<SmallVec<[EdgeId; 3]>>,
    in_edges: Vec<SmallVec<[EdgeId; 3]>>,
    incident: Vec<SmallVec<[(EdgeId, Direction); 4]>>,
}

impl Digraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes(n: usize) -> Self {
        Digraph {
            tails: Vec::new(),
            heads: Vec::new(),
            out_edges: vec![SmallVec::new(); n],
            in_edges: vec![SmallVec::new(); n],
            incident: vec![SmallVec::new(); n],
        }
    }

    pub fn add_node(&mut self) -> NodeId {
        let id = NodeId(self.out_edges.len() as u32);
        self.out_edges.push(SmallVec::new());
        self.in_edges.push(SmallVec::new());
        self.incident.push(SmallVec::new());
        id
    }

    pub fn add_edge(&mut self, tail: NodeId, head: NodeId) -> Result<EdgeId> {
        self.check_node(tail)?;
        self.check_node(head)?;
        if tail == head {
            return Err(Error::SelfLoop(tail));
        }
        let id = EdgeId(self.tails.len() as u32);
        self.tails.push(tail);
        self.heads.push(head);
        self.out_edges[tail.index()].push(id);
        self.in_edges[head.index()].push(id);
        self.incident[tail.index()].push((id, Direction::Forward));
        self.incident[head.index()].push((id, Direction::Backward));
        Ok(id)
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if v.index() < self.node_count() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v))
        }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.out_edges.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.tails.len()
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count() as u32).map(EdgeId)
    }

    #[inline]
    pub fn tail(&self, e: EdgeId) -> NodeId {
        self.tails[e.index()]
    }

    #[inline]
    pub fn head(&self, e: EdgeId) -> NodeId {
        self.heads[e.index()]
    }

    #[inline]
    pub fn endpoints(&self, e: EdgeId) -> (NodeId, NodeId) {
        (self.tail(e), self.head(e))
    }

    #[inline]
    pub fn out_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.out_edges[v.index()]
    }

    #[inline]
    pub fn in_edges(&self, v: NodeId) -> &[EdgeId] {
        &self.in_edges[v.index()]
    }

    /// Out- and in-edges of `v` merged in ascending edge id order.
    #[inline]
    pub fn incident(&self, v: NodeId) -> &[(EdgeId, Direction)] {
        &self.incident[v.index()]
    }

    /// The same graph with every edge reversed; edge ids are preserved.
    pub fn reversed(&self) -> Digraph {
        let mut g = Digraph::with_nodes(self.node_count());
        for e in self.edges() {
            g.add_edge(self.head(e), self.tail(e)).expect("valid edge");
        }
        g
    }

    /// Nodes reachable from `start` along edges accepted by `allowed`.
    pub fn reachable_from(&self, start: NodeId, allowed: impl Fn(EdgeId) -> bool) -> Vec<bool> {
        let mut seen = vec![false; self.node_count()];
        let mut queue = VecDeque::new();
        seen[start.index()] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &e in self.out_edges(u) {
                let w = self.head(e);
                if !seen[w.index()] && allowed(e) {
                    seen[w.index()] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

/// An s-t flow. `flow[e]` is indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowResult {
    pub value: u32,
    pub flow: Vec<u32>,
    pub augmentations: usize,
}

impl FlowResult {
    pub fn zero(g: &Digraph) -> Self {
        FlowResult {
            value: 0,
            flow: vec![0; g.edge_count()],
            augmentations: 0,
        }
    }

    pub fn net_outflow(&self, g: &Digraph, v: NodeId) -> i64 {
        let out: i64 = g.out_edges(v).iter().map(|e| self.flow[e.index()] as i64).sum();
        let inn: i64 = g.in_edges(v).iter().map(|e| self.flow[e.index()] as i64).sum();
        out - inn
    }

    /// Capacity bounds, conservation away from the terminals, and
    /// `value` matching the source's net outflow.
    pub fn is_valid(&self, g: &Digraph, cap: &[u32], s: NodeId, t: NodeId) -> bool {
        if self.flow.len() != g.edge_count() {
            return false;
        }
        if g.edges().any(|e| self.flow[e.index()] > cap[e.index()]) {
            return false;
        }
        let conserved = g
            .nodes()
            .filter(|&v| v != s && v != t)
            .all(|v| self.net_outflow(g, v) == 0);
        conserved && self.net_outflow(g, s) == self.value as i64
    }
}

/// Residual arcs leaving `v`: forward where the edge has slack, backward
/// where it carries flow.
pub fn residual_out<'a>(
    g: &'a Digraph,
    cap: &'a [u32],
    flow: &'a [u32],
    v: NodeId,
) -> impl Iterator<Item = (EdgeId, Direction, NodeId)> + 'a {
    g.incident(v).iter().filter_map(move |&(e, dir)| {
        let i = e.index();
        match dir {
            Direction::Forward if flow[i] < cap[i] => Some((e, dir, g.head(e))),
            Direction::Backward if flow[i] > 0 => Some((e, dir, g.tail(e))),
            _ => None,
        }
    })
}

/// Residual arcs entering `v`, reported as (edge, direction, residual tail).
pub fn residual_in<'a>(
    g: &'a Digraph,
    cap: &'a [u32],
    flow: &'a [u32],
    v: NodeId,
) -> impl Iterator<Item = (EdgeId, Direction, NodeId)> + 'a {
    g.incident(v).iter().filter_map(move |&(e, dir)| {
        let i = e.index();
        match dir {
            // edge leaves v: its backward residual arc enters v
            Direction::Forward if flow[i] > 0 => Some((e, Direction::Backward, g.head(e))),
            Direction::Backward if flow[i] < cap[i] => Some((e, Direction::Forward, g.tail(e))),
            _ => None,
        }
    })
}

/// Nodes reachable from `s` in the residual graph.
pub fn residual_reachable(g: &Digraph, cap: &[u32], flow: &[u32], s: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    seen[s.index()] = true;
    queue.push_back(s);
    while let Some(u) = queue.pop_front() {
        for (_, _, w) in residual_out(g, cap, flow, u) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Nodes that can reach `t` in the residual graph.
pub fn residual_reaching(g: &Digraph, cap: &[u32], flow: &[u32], t: NodeId) -> Vec<bool> {
    let mut seen = vec![false; g.node_count()];
    let mut queue = VecDeque::new();
    seen[t.index()] = true;
    queue.push_back(t);
    while let Some(u) = queue.pop_front() {
        for (_, _, w) in residual_in(g, cap, flow, u) {
            if !seen[w.index()] {
                seen[w.index()] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Edmonds-Karp max-flow. Each augmentation follows a shortest residual
/// path, scanning arcs in ascending edge id. With `limit`, stops as soon
/// as the value reaches it.
pub fn max_flow(g: &Digraph, cap: &[u32], s: NodeId, t: NodeId, limit: Option<u32>) -> Result<FlowResult> {
    g.check_node(s)?;
    g.check_node(t)?;
    if s == t {
        return Err(Error::SourceIsTarget);
    }
    assert_eq!(cap.len(), g.edge_count(), "one capacity per edge");

    let n = g.node_count();
    let mut result = FlowResult::zero(g);
    let mut pred: Vec<Option<(EdgeId, Direction)>> = vec![None; n];
    let mut stamp = vec![0u32; n];
    let mut epoch = 0u32;
    let mut queue = VecDeque::new();

    loop {
        if limit.is_some_and(|l| result.value >= l) {
            break;
        }
        epoch += 1;
        queue.clear();
        stamp[s.index()] = epoch;
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            for (e, dir, w) in residual_out(g, cap, &result.flow, u) {
                if stamp[w.index()] != epoch {
                    stamp[w.index()] = epoch;
                    pred[w.index()] = Some((e, dir));
                    if w == t {
                        break 'bfs;
                    }
                    queue.push_back(w);
                }
            }
        }
        if stamp[t.index()] != epoch {
            break;
        }

        let mut bottleneck = u32::MAX;
        let mut v = t;
        while v != s {
            let (e, dir) = pred[v.index()].expect("path predecessor");
            let i = e.index();
            let (slack, prev) = match dir {
                Direction::Forward => (cap[i] - result.flow[i], g.tail(e)),
                Direction::Backward => (result.flow[i], g.head(e)),
            };
            bottleneck = bottleneck.min(slack);
            v = prev;
        }
        let mut v = t;
        while v != s {
            let (e, dir) = pred[v.index()].expect("path predecessor");
            let i = e.index();
            match dir {
                Direction::Forward => {
                    result.flow[i] += bottleneck;
                    v = g.tail(e);
                }
                Direction::Backward => {
                    result.flow[i] -= bottleneck;
                    v = g.head(e);
                }
            }
        }
        result.value += bottleneck;
        result.augmentations += 1;
    }
    Ok(result)
}

/// Strongly connected components of a residual graph in topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationDag {
    pub components: Vec<Vec<NodeId>>,
    pub component_of: Vec<usize>,
}

impl CondensationDag {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Condenses the residual graph of a maximum flow. Every residual arc stays
/// inside a component or points from an earlier component to a later one.
pub fn residual_scc_condensation(
    g: &Digraph,
    cap: &[u32],
    flow: &FlowResult,
    s: NodeId,
    t: NodeId,
) -> Result<CondensationDag> {
    g.check_node(s)?;
    g.check_node(t)?;
    if residual_reachable(g, cap, &flow.flow, s)[t.index()] {
        return Err(Error::NotMaximum);
    }
    Ok(tarjan(g, |v, out: &mut Vec<NodeId>| {
        out.extend(residual_out(g, cap, &flow.flow, v).map(|(_, _, w)| w))
    }))
}

/// Iterative Tarjan over an implicit successor function. Components are
/// returned sources first.
fn tarjan(g: &Digraph, successors: impl Fn(NodeId, &mut Vec<NodeId>)) -> CondensationDag {
    const UNSEEN: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut next_index = 0u32;
    let mut completed: Vec<Vec<NodeId>> = Vec::new();
    // (node, successor list, cursor)
    let mut call: Vec<(NodeId, Vec<NodeId>, usize)> = Vec::new();

    for root in g.nodes() {
        if index[root.index()] != UNSEEN {
            continue;
        }
        let mut succ = Vec::new();
        successors(root, &mut succ);
        index[root.index()] = next_index;
        low[root.index()] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root.index()] = true;
        call.push((root, succ, 0));

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.2 < top.1.len() {
                let w = top.1[top.2];
                top.2 += 1;
                if index[w.index()] == UNSEEN {
                    let mut wsucc = Vec::new();
                    successors(w, &mut wsucc);
                    index[w.index()] = next_index;
                    low[w.index()] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w.index()] = true;
                    call.push((w, wsucc, 0));
                } else if on_stack[w.index()] {
                    low[v.index()] = low[v.index()].min(index[w.index()]);
                }
                continue;
            }
            call.pop();
            if let Some((parent, _, _)) = call.last() {
                let p = parent.index();
                low[p] = low[p].min(low[v.index()]);
            }
            if low[v.index()] == index[v.index()] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w.index()] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                completed.push(comp);
            }
        }
    }

    completed.reverse();
    let mut component_of = vec![0; n];
    for (ci, comp) in completed.iter().enumerate() {
        for v in comp {
            component_of[v.index()] = ci;
        }
    }
    CondensationDag {
        components: completed,
        component_of,
    }
}

/// One s-t path of a flow decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowPath {
    pub edges: Vec<EdgeId>,
    pub amount: u32,
}

/// Removes flow circulating on directed cycles. Returns the number of
/// cycles cancelled. The result has the same value and acyclic support.
pub fn cancel_flow_cycles(g: &Digraph, flow: &mut [u32]) -> usize {
    const WHITE: u8 = 0;
    const GRAY: u8 = 1;
    const BLACK: u8 = 2;
    let n = g.node_count();
    let mut color = vec![WHITE; n];
    let mut cursor = vec![0usize; n];
    let mut stack_pos = vec![0usize; n];
    let mut nodes: Vec<NodeId> = Vec::new();
    let mut edges: Vec<EdgeId> = Vec::new();
    let mut cancelled = 0;

    for root in g.nodes() {
        if color[root.index()] != WHITE {
            continue;
        }
        color[root.index()] = GRAY;
        stack_pos[root.index()] = 0;
        nodes.push(root);

        while let Some(&u) = nodes.last() {
            let out = g.out_edges(u);
            // The cursor only moves past an edge once it can no longer
            // close a cycle.
            let mut advanced = false;
            while cursor[u.index()] < out.len() {
                let e = out[cursor[u.index()]];
                if flow[e.index()] == 0 {
                    cursor[u.index()] += 1;
                    continue;
                }
                let w = g.head(e);
                match color[w.index()] {
                    BLACK => cursor[u.index()] += 1,
                    WHITE => {
                        color[w.index()] = GRAY;
                        stack_pos[w.index()] = nodes.len();
                        nodes.push(w);
                        edges.push(e);
                        advanced = true;
                        break;
                    }
                    _ => {
                        let start = stack_pos[w.index()];
                        let delta = edges[start..]
                            .iter()
                            .chain(std::iter::once(&e))
                            .map(|x| flow[x.index()])
                            .min()
                            .expect("non-empty cycle");
                        for x in edges[start..].iter().chain(std::iter::once(&e)) {
                            flow[x.index()] -= delta;
                        }
                        cancelled += 1;
                        // Unwind to the tail of the first emptied cycle edge.
                        let cut = edges[start..]
                            .iter()
                            .position(|x| flow[x.index()] == 0)
                            .map(|j| start + j);
                        if let Some(j) = cut {
                            for v in nodes.drain(j + 1..) {
                                color[v.index()] = WHITE;
                            }
                            edges.truncate(j);
                        }
                        advanced = true;
                        break;
                    }
                }
            }
            if !advanced {
                color[u.index()] = BLACK;
                nodes.pop();
                edges.pop();
            }
        }
    }
    cancelled
}

/// Splits a conserved flow into s-t paths whose amounts sum to the value.
/// Cycles are cancelled first, so every returned path is simple.
pub fn decompose_flow_to_paths(g: &Digraph, flow: &FlowResult, s: NodeId, t: NodeId) -> Vec<FlowPath> {
    let mut remaining = flow.flow.clone();
    cancel_flow_cycles(g, &mut remaining);
    let mut cursor = vec![0usize; g.node_count()];
    let mut paths = Vec::new();

    'outer: loop {
        let mut path = Vec::new();
        let mut u = s;
        while u != t {
            let out = g.out_edges(u);
            let c = &mut cursor[u.index()];
            while *c < out.len() && remaining[out[*c].index()] == 0 {
                *c += 1;
            }
            if *c == out.len() {
                debug_assert!(path.is_empty(), "flow is not conserved at {u}");
                break 'outer;
            }
            let e = out[*c];
            path.push(e);
            u = g.head(e);
        }
        let amount = path.iter().map(|e| remaining[e.index()]).min().unwrap_or(0);
        for e in &path {
            remaining[e.index()] -= amount;
        }
        paths.push(FlowPath { edges: path, amount });
    }
    paths
}

/// `want` pairwise arc-disjoint s-t paths, treating every edge as one unit.
pub fn edge_disjoint_paths(g: &Digraph, s: NodeId, t: NodeId, want: usize) -> Result<Vec<Vec<EdgeId>>> {
    let cap = vec![1u32; g.edge_count()];
    let flow = max_flow(g, &cap, s, t, Some(want as u32))?;
    if (flow.value as usize) < want {
        return Err(Error::Insufficient {
            found: flow.value as usize,
            wanted: want,
        });
    }
    Ok(decompose_flow_to_paths(g, &flow, s, t)
        .into_iter()
        .map(|p| p.edges)
        .collect())
}
