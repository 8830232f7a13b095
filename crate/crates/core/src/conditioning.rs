//! Coding capacities, the reduced-capacity feasibility test and the
//! conditioning pipeline that prepares a NETWORK_CODING instance for
//! decomposition.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cut_chain::{build_cut_chain, CutChain};
use crate::error::{Error, Result};
use crate::graph::{cancel_flow_cycles, max_flow, EdgeId, FlowResult};
use crate::network::{CodingNetwork, Names, Network};

/// Doubled reduced flow that a feasible critical network carries.
pub const CRITICAL_FLOW: u32 = 6;

/// Reduced capacity of a coding capacity, in doubled units.
#[inline]
pub fn reduced(c: u8) -> u32 {
    match c {
        2 => 3,
        _ => 2,
    }
}

/// Reduced capacities `c̄` of every edge, doubled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedView {
    pub capacity: Vec<u32>,
}

impl ReducedView {
    pub fn of(cn: &CodingNetwork) -> Self {
        ReducedView {
            capacity: cn.capacity.iter().map(|&c| reduced(c)).collect(),
        }
    }
}

/// Clamps free capacities to {1, 2} and drops edges with `k = 0`.
pub fn derive_coding_capacities(net: &Network) -> CodingNetwork {
    let full = CodingNetwork {
        graph: net.graph.clone(),
        capacity: net.free_capacity.iter().map(|&k| k.min(2) as u8).collect(),
        source: net.source,
        target: net.target,
        origin: net.graph.edges().collect(),
        names: Arc::new(Names {
            nodes: net.node_names.clone(),
            edges: net.edge_names.clone(),
        }),
    };
    full.restrict(|e| net.free_capacity[e.index()] > 0).0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FeasibilityClass {
    DiversityCoding,
    NetworkCoding,
    #[serde(rename = "UNPROTECTED_2FLOW")]
    Unprotected2Flow,
    Infeasible,
}

impl FeasibilityClass {
    pub fn is_protectable(self) -> bool {
        matches!(
            self,
            FeasibilityClass::DiversityCoding | FeasibilityClass::NetworkCoding
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeasibilityClass::DiversityCoding => "DIVERSITY_CODING",
            FeasibilityClass::NetworkCoding => "NETWORK_CODING",
            FeasibilityClass::Unprotected2Flow => "UNPROTECTED_2FLOW",
            FeasibilityClass::Infeasible => "INFEASIBLE",
        }
    }
}

impl fmt::Display for FeasibilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for FeasibilityClass {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [
            FeasibilityClass::DiversityCoding,
            FeasibilityClass::NetworkCoding,
            FeasibilityClass::Unprotected2Flow,
            FeasibilityClass::Infeasible,
        ]
        .into_iter()
        .find(|c| c.as_str().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("unknown feasibility class `{s}`"))
    }
}

/// A classification together with the flow values it was derived from.
///
/// `reduced_flow` is doubled and capped at 7, so 7 means "more than 3".
/// `coding_flow` is the max flow under the coding capacities and is only
/// computed when the reduced test fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    pub class: FeasibilityClass,
    pub reduced_flow: u32,
    pub coding_flow: Option<u32>,
}

impl Feasibility {
    /// The reduced max flow in real units, saturating at 3.5.
    pub fn reduced_units(&self) -> f64 {
        self.reduced_flow as f64 / 2.0
    }
}

pub fn classify_feasibility(cn: &CodingNetwork) -> Result<Feasibility> {
    let reduced_cap = ReducedView::of(cn).capacity;
    let r = max_flow(
        &cn.graph,
        &reduced_cap,
        cn.source,
        cn.target,
        Some(CRITICAL_FLOW + 1),
    )?;
    let class = if r.value > CRITICAL_FLOW {
        FeasibilityClass::DiversityCoding
    } else if r.value == CRITICAL_FLOW {
        FeasibilityClass::NetworkCoding
    } else {
        let cap: Vec<u32> = cn.capacity.iter().map(|&c| c as u32).collect();
        let f = max_flow(&cn.graph, &cap, cn.source, cn.target, Some(2))?;
        return Ok(Feasibility {
            class: if f.value >= 2 {
                FeasibilityClass::Unprotected2Flow
            } else {
                FeasibilityClass::Infeasible
            },
            reduced_flow: r.value,
            coding_flow: Some(f.value),
        });
    };
    Ok(Feasibility {
        class,
        reduced_flow: r.value.min(CRITICAL_FLOW + 1),
        coding_flow: None,
    })
}

/// A NETWORK_CODING subnetwork ready for decomposition.
///
/// `network` keeps the original node set but only edges that carry flow,
/// with capacity-2 edges inside a chain region demoted to 1. `parent[e]`
/// is the id in the input network of retained edge `e`; `demoted` lists
/// demoted edges by input id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionedNetwork {
    pub network: CodingNetwork,
    pub parent: Vec<EdgeId>,
    pub flow: FlowResult,
    pub chain: CutChain,
    pub demoted: Vec<EdgeId>,
    pub rounds: usize,
}

/// Runs flow, pruning, chain construction and demotion until nothing
/// changes. Each extra round removes or demotes at least one edge.
pub fn condition_network(cn: &CodingNetwork) -> Result<ConditionedNetwork> {
    let feasibility = classify_feasibility(cn)?;
    if feasibility.class != FeasibilityClass::NetworkCoding {
        return Err(Error::NotNetworkCodingClass(feasibility.class));
    }

    let mut current = cn.clone();
    let mut parent: Vec<EdgeId> = cn.graph.edges().collect();
    let mut demoted = Vec::new();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let cap = ReducedView::of(&current).capacity;
        let mut flow = max_flow(&current.graph, &cap, current.source, current.target, None)?;
        if flow.value != CRITICAL_FLOW {
            return Err(Error::Invariant(format!(
                "conditioned network carries reduced flow {} instead of {CRITICAL_FLOW}",
                flow.value
            )));
        }
        cancel_flow_cycles(&current.graph, &mut flow.flow);

        let pruned = flow.flow.contains(&0);
        if pruned {
            let (sub, map) = current.restrict(|e| flow.flow[e.index()] > 0);
            flow.flow = map.iter().map(|e| flow.flow[e.index()]).collect();
            parent = map.iter().map(|e| parent[e.index()]).collect();
            current = sub;
        }

        let chain = build_cut_chain(&current, &flow)?;
        let mut demote = Vec::new();
        for e in current.graph.edges() {
            let (u, v) = current.graph.endpoints(e);
            let (pu, pv) = (chain.position[u.index()], chain.position[v.index()]);
            if pu > pv {
                return Err(Error::Invariant(format!(
                    "edge {} runs backward across the cut chain",
                    current.edge_name(e)
                )));
            }
            if pu == pv && current.capacity[e.index()] == 2 {
                demote.push(e);
            }
        }

        if !pruned && demote.is_empty() {
            demoted.sort();
            return Ok(ConditionedNetwork {
                network: current,
                parent,
                flow,
                chain,
                demoted,
                rounds,
            });
        }
        for e in demote {
            current.capacity[e.index()] = 1;
            demoted.push(parent[e.index()]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::NodeId;

    #[test]
    fn clamp_and_drop() {
        let mut b = Network::builder();
        b.named_edge("e1", "s", "a", 5).unwrap();
        b.named_edge("e2", "a", "t", 1).unwrap();
        b.named_edge("e3", "s", "t", 0).unwrap();
        let net = b.build("s", "t").unwrap();
        let cn = derive_coding_capacities(&net);
        assert_eq!(cn.capacity, [2, 1]);
        assert_eq!(
            cn.graph.edges().map(|e| cn.edge_name(e)).collect::<Vec<_>>(),
            ["e1", "e2"]
        );
        assert_eq!(cn.origin, [EdgeId(0), EdgeId(1)]);
    }

    #[test]
    fn unit_network_unchanged() {
        let net = fixtures::tripath();
        let cn = derive_coding_capacities(&net);
        assert_eq!(cn.graph, net.graph);
        assert!(cn.capacity.iter().all(|&c| c == 1));
    }

    #[test]
    fn reduced_mapping() {
        assert_eq!(reduced(1), 2);
        assert_eq!(reduced(2), 3);
    }

    #[test]
    fn classes_of_fixtures() {
        let class = |net: Network| classify_feasibility(&derive_coding_capacities(&net)).unwrap();
        let fig1 = class(fixtures::fig1());
        assert_eq!(fig1.class, FeasibilityClass::NetworkCoding);
        assert_eq!(fig1.reduced_flow, 6);
        assert_eq!(class(fixtures::tripath()).class, FeasibilityClass::NetworkCoding);
        let dc = class(fixtures::tripath_plus());
        assert_eq!(dc.class, FeasibilityClass::DiversityCoding);
        assert_eq!(dc.reduced_flow, 7);
        let chain = class(fixtures::double_chain());
        assert_eq!(chain.class, FeasibilityClass::Unprotected2Flow);
        assert_eq!(chain.reduced_flow, 3);
        assert_eq!(class(fixtures::unit_chain()).class, FeasibilityClass::Infeasible);
    }

    #[test]
    fn class_strings_round_trip() {
        for c in [
            FeasibilityClass::DiversityCoding,
            FeasibilityClass::NetworkCoding,
            FeasibilityClass::Unprotected2Flow,
            FeasibilityClass::Infeasible,
        ] {
            assert_eq!(c.as_str().parse::<FeasibilityClass>(), Ok(c));
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        }
    }

    #[test]
    fn rejects_other_classes() {
        let cn = derive_coding_capacities(&fixtures::tripath_plus());
        assert_eq!(
            condition_network(&cn),
            Err(Error::NotNetworkCodingClass(FeasibilityClass::DiversityCoding))
        );
    }

    fn assert_conditioned(c: &ConditionedNetwork) {
        let net = &c.network;
        assert!(c.flow.flow.iter().all(|&x| (1..=3).contains(&x)));
        assert!(c
            .flow
            .is_valid(&net.graph, &ReducedView::of(net).capacity, net.source, net.target));
        for e in net.graph.edges() {
            let (u, v) = net.graph.endpoints(e);
            if net.c(e) == 2 {
                assert!(c.chain.position[u.index()] < c.chain.position[v.index()]);
            }
        }
        assert_eq!(
            classify_feasibility(net).unwrap().class,
            FeasibilityClass::NetworkCoding
        );
    }

    #[test]
    fn diamond_flow_values() {
        let c = condition_network(&derive_coding_capacities(&fixtures::diamond2())).unwrap();
        assert_eq!(c.network.graph.edge_count(), 4);
        assert_eq!(c.flow.flow, [3, 3, 3, 3]);
        assert!(c.demoted.is_empty());
        assert_conditioned(&c);
    }

    #[test]
    fn fig1_conditions_cleanly() {
        let cn = derive_coding_capacities(&fixtures::fig1());
        let c = condition_network(&cn).unwrap();
        assert_eq!(c.network.graph.edge_count(), 22);
        assert!(c.demoted.is_empty());
        assert_eq!(c.rounds, 1);
        assert_conditioned(&c);
    }

    #[test]
    fn redundant_double_edge_is_demoted() {
        // a->c is thick but only carries 1 unit: its endpoints share a
        // residual component, so conditioning must demote it.
        let cn = CodingNetwork::from_edges(
            6,
            &[
                (0, 1, 2),
                (0, 2, 2),
                (1, 3, 2),
                (1, 4, 1),
                (3, 5, 1),
                (4, 5, 1),
                (2, 5, 2),
            ],
            0,
            5,
        )
        .unwrap();
        assert_eq!(
            classify_feasibility(&cn).unwrap().class,
            FeasibilityClass::NetworkCoding
        );
        let c = condition_network(&cn).unwrap();
        assert_eq!(c.demoted, [EdgeId(2)]);
        let mut demoted_net = cn.clone();
        for e in &c.demoted {
            demoted_net.capacity[e.index()] = 1;
        }
        assert_eq!(classify_feasibility(&demoted_net).unwrap().reduced_flow, 6);
        assert_conditioned(&c);
    }

    #[test]
    fn idempotent_on_fixtures() {
        for net in [fixtures::fig1(), fixtures::diamond2(), fixtures::tripath()] {
            let once = condition_network(&derive_coding_capacities(&net)).unwrap();
            let twice = condition_network(&once.network).unwrap();
            assert_eq!(twice.network.graph, once.network.graph);
            assert_eq!(twice.network.capacity, once.network.capacity);
            assert_eq!(twice.flow, once.flow);
            assert_eq!(twice.chain, once.chain);
            assert!(twice.demoted.is_empty());
            assert_eq!(twice.parent, once.network.graph.edges().collect::<Vec<_>>());
        }
    }

    #[test]
    fn source_is_checked() {
        let mut cn = derive_coding_capacities(&fixtures::tripath());
        cn.source = NodeId(99);
        assert_eq!(classify_feasibility(&cn), Err(Error::UnknownNode(NodeId(99))));
    }
}
