//! Input networks with free capacities and the coding-capacity view used
//! by the rest of the pipeline.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Digraph, EdgeId, NodeId};

/// A raw input network: a digraph with free integer capacities `k(e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    pub graph: Digraph,
    pub free_capacity: Vec<u32>,
    pub source: NodeId,
    pub target: NodeId,
    pub node_names: Vec<String>,
    pub edge_names: Vec<String>,
}

impl Network {
    pub fn builder() -> NetworkBuilder {
        NetworkBuilder::default()
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.node_names
            .iter()
            .position(|n| n == name)
            .map(|i| NodeId(i as u32))
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_names
            .iter()
            .position(|n| n == name)
            .map(|i| EdgeId(i as u32))
    }
}

/// Builds a [`Network`] from named nodes and edges. Nodes are created on
/// first mention; unnamed edges are called `e0`, `e1`, ...
#[derive(Debug, Default, Clone)]
pub struct NetworkBuilder {
    graph: Digraph,
    free_capacity: Vec<u32>,
    node_names: Vec<String>,
    edge_names: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl NetworkBuilder {
    pub fn node(&mut self, name: &str) -> NodeId {
        if let Some(&v) = self.index.get(name) {
            return v;
        }
        let v = self.graph.add_node();
        self.node_names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        v
    }

    pub fn edge(&mut self, tail: &str, head: &str, k: u32) -> Result<EdgeId> {
        let name = format!("e{}", self.edge_names.len());
        self.named_edge(&name, tail, head, k)
    }

    pub fn named_edge(&mut self, name: &str, tail: &str, head: &str, k: u32) -> Result<EdgeId> {
        let u = self.node(tail);
        let v = self.node(head);
        let e = self.graph.add_edge(u, v)?;
        self.free_capacity.push(k);
        self.edge_names.push(name.to_string());
        Ok(e)
    }

    pub fn build(mut self, source: &str, target: &str) -> Result<Network> {
        if source == target {
            return Err(Error::SourceIsTarget);
        }
        let source = self.node(source);
        let target = self.node(target);
        Ok(Network {
            graph: self.graph,
            free_capacity: self.free_capacity,
            source,
            target,
            node_names: self.node_names,
            edge_names: self.edge_names,
        })
    }
}

/// Node and edge names of an input network, indexed by input ids.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Names {
    pub nodes: Vec<String>,
    pub edges: Vec<String>,
}

/// A network with coding capacities `c(e)` in {1, 2}.
///
/// `origin[e]` is the id of the edge in the [`Network`] this one came from,
/// so plans computed here can be reported against the input. Subnetworks
/// share the input's names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingNetwork {
    pub graph: Digraph,
    pub capacity: Vec<u8>,
    pub source: NodeId,
    pub target: NodeId,
    pub origin: Vec<EdgeId>,
    pub names: Arc<Names>,
}

impl CodingNetwork {
    /// A coding network over anonymous nodes `0..n`. Edges are
    /// `(tail, head, c)` triples; `c` must be 1 or 2.
    pub fn from_edges(n: usize, edges: &[(u32, u32, u8)], source: u32, target: u32) -> Result<CodingNetwork> {
        let mut graph = Digraph::with_nodes(n);
        let mut capacity = Vec::with_capacity(edges.len());
        for &(u, v, c) in edges {
            if !(1..=2).contains(&c) {
                return Err(Error::Invariant(format!("coding capacity {c} is not 1 or 2")));
            }
            graph.add_edge(NodeId(u), NodeId(v))?;
            capacity.push(c);
        }
        let (source, target) = (NodeId(source), NodeId(target));
        graph.check_node(source)?;
        graph.check_node(target)?;
        if source == target {
            return Err(Error::SourceIsTarget);
        }
        Ok(CodingNetwork {
            origin: graph.edges().collect(),
            names: Arc::new(Names {
                nodes: (0..n).map(|i| format!("v{i}")).collect(),
                edges: (0..edges.len()).map(|i| format!("e{i}")).collect(),
            }),
            graph,
            capacity,
            source,
            target,
        })
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        &self.names.nodes[v.index()]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.names.edges[self.origin[e.index()].index()]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.names
            .nodes
            .iter()
            .position(|n| n == name)
            .map(|i| NodeId(i as u32))
    }

    /// The retained edge whose input edge is called `name`.
    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.graph.edges().find(|&e| self.edge_name(e) == name)
    }

    #[inline]
    pub fn c(&self, e: EdgeId) -> u8 {
        self.capacity[e.index()]
    }

    pub fn total_arcs(&self) -> usize {
        self.capacity.iter().map(|&c| c as usize).sum()
    }

    /// Keeps the edges accepted by `keep`, in order, over the same node set.
    /// Returns the subnetwork and, for each kept edge, its id in `self`.
    pub fn restrict(&self, keep: impl Fn(EdgeId) -> bool) -> (CodingNetwork, Vec<EdgeId>) {
        let mut graph = Digraph::with_nodes(self.graph.node_count());
        let mut capacity = Vec::new();
        let mut origin = Vec::new();
        let mut parent = Vec::new();
        for e in self.graph.edges().filter(|&e| keep(e)) {
            let (u, v) = self.graph.endpoints(e);
            graph.add_edge(u, v).expect("edge of a valid graph");
            capacity.push(self.capacity[e.index()]);
            origin.push(self.origin[e.index()]);
            parent.push(e);
        }
        let sub = CodingNetwork {
            graph,
            capacity,
            source: self.source,
            target: self.target,
            origin,
            names: Arc::clone(&self.names),
        };
        (sub, parent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_reuses_nodes() {
        let mut b = Network::builder();
        b.edge("s", "a", 1).unwrap();
        b.edge("a", "t", 2).unwrap();
        b.edge("s", "t", 0).unwrap();
        let net = b.build("s", "t").unwrap();
        assert_eq!(net.graph.node_count(), 3);
        assert_eq!(net.node_by_name("t"), Some(net.target));
        assert_eq!(net.edge_names, ["e0", "e1", "e2"]);
    }

    #[test]
    fn builder_rejects_equal_terminals() {
        let mut b = Network::builder();
        b.edge("s", "a", 1).unwrap();
        assert_eq!(b.build("s", "s"), Err(Error::SourceIsTarget));
    }

    #[test]
    fn restrict_keeps_origin() {
        let cn = CodingNetwork::from_edges(3, &[(0, 1, 2), (1, 2, 1), (0, 2, 1)], 0, 2).unwrap();
        let (sub, parent) = cn.restrict(|e| e.0 != 1);
        assert_eq!(parent, [EdgeId(0), EdgeId(2)]);
        assert_eq!(sub.origin, [EdgeId(0), EdgeId(2)]);
        assert_eq!(sub.capacity, [2, 1]);
        let (sub2, parent2) = sub.restrict(|e| e.0 == 1);
        assert_eq!(parent2, [EdgeId(1)]);
        assert_eq!(sub2.origin, [EdgeId(2)]);
    }

    #[test]
    fn from_edges_rejects_bad_capacity() {
        assert!(CodingNetwork::from_edges(2, &[(0, 1, 3)], 0, 1).is_err());
        assert!(CodingNetwork::from_edges(2, &[(0, 1, 1)], 0, 0).is_err());
    }
}
