//! Independent checks of recovery plans and of feasibility itself.
//!
//! [`verify_plan`] searches each labeled subflow once per failed edge and is
//! the reference oracle. [`certify_plan`] reaches the same report in linear
//! time by finding, per subflow, the edges every s-t path depends on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decompose::{build_auxiliary, Label, RecoveryPlan};
use crate::error::{Error, Result};
use crate::graph::{max_flow, residual_scc_condensation, Digraph, EdgeId};
use crate::network::CodingNetwork;

/// Largest auxiliary graph [`brute_force_decomposition_exists`] accepts.
pub const BRUTE_FORCE_MAX_ARCS: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An arc names an edge or copy the network does not have.
    UnknownArc {
        label: Label,
        edge: EdgeId,
        copy: u8,
    },
    /// The same arc appears more than once across the subflows.
    SharedArc {
        edge: EdgeId,
        copy: u8,
        labels: Vec<Label>,
    },
    Overcapacity {
        edge: EdgeId,
        used: usize,
        capacity: u8,
    },
    Disconnected {
        label: Label,
    },
    /// Fewer than two subflows survive the failure of `edge`.
    Vulnerable {
        edge: EdgeId,
        surviving: Vec<Label>,
    },
    TerminalMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSurvival {
    pub edge: EdgeId,
    pub surviving: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub disjointness_ok: bool,
    pub capacity_ok: bool,
    pub connectivity: BTreeMap<Label, bool>,
    pub survivability: Vec<EdgeSurvival>,
    pub overall: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn surviving(&self, edge: EdgeId) -> &[Label] {
        &self.survivability[edge.index()].surviving
    }
}

/// Checks that do not depend on connectivity. Returns the per-label edge
/// lists of the valid arcs.
fn structural(cn: &CodingNetwork, plan: &RecoveryPlan, v: &mut Vec<Violation>) -> [Vec<EdgeId>; 3] {
    if plan.source != cn.source || plan.target != cn.target {
        v.push(Violation::TerminalMismatch);
    }
    let m = cn.graph.edge_count();
    let mut users: BTreeMap<(EdgeId, u8), Vec<Label>> = BTreeMap::new();
    let mut used = vec![0usize; m];
    let mut edges: [Vec<EdgeId>; 3] = Default::default();
    for label in Label::ALL {
        for a in plan.subflow(label) {
            if a.edge.index() >= m || a.copy >= cn.c(a.edge) {
                v.push(Violation::UnknownArc {
                    label,
                    edge: a.edge,
                    copy: a.copy,
                });
                continue;
            }
            used[a.edge.index()] += 1;
            users.entry((a.edge, a.copy)).or_default().push(label);
            edges[label.index()].push(a.edge);
        }
    }
    for ((edge, copy), labels) in users {
        if labels.len() > 1 {
            v.push(Violation::SharedArc { edge, copy, labels });
        }
    }
    for e in cn.graph.edges() {
        if used[e.index()] > cn.c(e) as usize {
            v.push(Violation::Overcapacity {
                edge: e,
                used: used[e.index()],
                capacity: cn.c(e),
            });
        }
    }
    edges
}

fn finish(
    cn: &CodingNetwork,
    mut violations: Vec<Violation>,
    connected: [bool; 3],
    survivors: impl Fn(EdgeId) -> Vec<Label>,
) -> VerificationReport {
    for label in Label::ALL {
        if !connected[label.index()] {
            violations.push(Violation::Disconnected { label });
        }
    }
    let mut survivability = Vec::with_capacity(cn.graph.edge_count());
    for edge in cn.graph.edges() {
        let surviving = survivors(edge);
        if surviving.len() < 2 {
            violations.push(Violation::Vulnerable {
                edge,
                surviving: surviving.clone(),
            });
        }
        survivability.push(EdgeSurvival { edge, surviving });
    }
    let disjointness_ok = !violations
        .iter()
        .any(|v| matches!(v, Violation::SharedArc { .. } | Violation::UnknownArc { .. }));
    let capacity_ok = !violations
        .iter()
        .any(|v| matches!(v, Violation::Overcapacity { .. }));
    VerificationReport {
        disjointness_ok,
        capacity_ok,
        connectivity: Label::ALL
            .into_iter()
            .map(|l| (l, connected[l.index()]))
            .collect(),
        survivability,
        overall: violations.is_empty(),
        violations,
    }
}

/// Reference verification: one graph search per subflow and failed edge.
pub fn verify_plan(cn: &CodingNetwork, plan: &RecoveryPlan) -> VerificationReport {
    let mut violations = Vec::new();
    let edges = structural(cn, plan, &mut violations);
    let m = cn.graph.edge_count();
    let member: Vec<Vec<bool>> = edges
        .iter()
        .map(|list| {
            let mut mask = vec![false; m];
            for e in list {
                mask[e.index()] = true;
            }
            mask
        })
        .collect();
    let connects = |l: usize, failed: Option<EdgeId>| {
        let reach = cn
            .graph
            .reachable_from(cn.source, |e| member[l][e.index()] && Some(e) != failed);
        reach[cn.target.index()]
    };
    let connected = [0, 1, 2].map(|l| connects(l, None));
    finish(cn, violations, connected, |e| {
        Label::ALL
            .into_iter()
            .filter(|l| {
                let i = l.index();
                if member[i][e.index()] {
                    connects(i, Some(e))
                } else {
                    connected[i]
                }
            })
            .collect()
    })
}

/// Edges of `edges` lying on every s-t path of the subgraph they span, or
/// `None` if that subgraph does not connect s to t.
fn critical_edges(n: usize, cn: &CodingNetwork, edges: &[EdgeId]) -> Option<Vec<EdgeId>> {
    let mut list = edges.to_vec();
    list.sort();
    list.dedup();
    let mut g = Digraph::with_nodes(n);
    for &e in &list {
        let (u, v) = cn.graph.endpoints(e);
        g.add_edge(u, v).expect("edge of a valid graph");
    }
    let cap = vec![1; list.len()];
    let (s, t) = (cn.source, cn.target);
    let flow = max_flow(&g, &cap, s, t, Some(2)).expect("terminals of a valid network");
    match flow.value {
        0 => None,
        1 => {
            let dag = residual_scc_condensation(&g, &cap, &flow, s, t).expect("flow is maximum");
            Some(
                g.edges()
                    .filter(|&e| {
                        let (u, v) = g.endpoints(e);
                        flow.flow[e.index()] == 1
                            && dag.component_of[u.index()] != dag.component_of[v.index()]
                    })
                    .map(|e| list[e.index()])
                    .collect(),
            )
        }
        _ => Some(Vec::new()),
    }
}

/// Linear-time verification with the same report as [`verify_plan`].
///
/// A subflow with two arc-disjoint s-t paths survives any single failure.
/// Otherwise its max flow is 1, and it loses connectivity exactly when an
/// edge separating two residual components of that flow fails.
pub fn certify_plan(cn: &CodingNetwork, plan: &RecoveryPlan) -> VerificationReport {
    let mut violations = Vec::new();
    let edges = structural(cn, plan, &mut violations);
    let n = cn.graph.node_count();
    let mut connected = [false; 3];
    let mut kills = vec![0u8; cn.graph.edge_count()];
    for (i, list) in edges.iter().enumerate() {
        if let Some(critical) = critical_edges(n, cn, list) {
            connected[i] = true;
            for e in critical {
                kills[e.index()] |= 1 << i;
            }
        }
    }
    finish(cn, violations, connected, |e| {
        Label::ALL
            .into_iter()
            .filter(|l| connected[l.index()] && kills[e.index()] & (1 << l.index()) == 0)
            .collect()
    })
}

/// Feasibility straight from its definition: a flow of 2 under the coding
/// capacities survives the deletion of any one edge.
pub fn brute_force_feasible(cn: &CodingNetwork) -> bool {
    let cap: Vec<u32> = cn.capacity.iter().map(|&c| c as u32).collect();
    let flow_without = |skip: Option<EdgeId>| {
        let (sub, map) = cn.restrict(|e| Some(e) != skip);
        let sub_cap: Vec<u32> = map.iter().map(|e| cap[e.index()]).collect();
        max_flow(&sub.graph, &sub_cap, cn.source, cn.target, Some(2))
            .map(|f| f.value)
            .unwrap_or(0)
    };
    flow_without(None) >= 2 && cn.graph.edges().all(|e| flow_without(Some(e)) >= 2)
}

/// Exhaustive search for a plan on a tiny network.
///
/// Adding arcs to a subflow never hurts its survivability, so it suffices to
/// try every split of all arcs into three sets.
pub fn brute_force_decomposition_exists(cn: &CodingNetwork) -> Result<bool> {
    let aux = build_auxiliary(cn);
    let arcs = aux.arc_count();
    if arcs > BRUTE_FORCE_MAX_ARCS {
        return Err(Error::TooLarge {
            arcs,
            max: BRUTE_FORCE_MAX_ARCS,
        });
    }
    let edges = cn.graph.edge_count();
    let all_edges: u32 = (1 << edges) - 1;
    let connects = |mask: u32, failed: Option<usize>| {
        let reach = aux.graph.reachable_from(cn.source, |a| {
            mask & (1 << a.index()) != 0 && Some(aux.arc(a).edge.index()) != failed
        });
        reach[cn.target.index()]
    };
    // For each arc subset: the edges whose failure disconnects it, or all
    // edges if it is not connected to begin with.
    let kill: Vec<u32> = (0..1u32 << arcs)
        .map(|mask| {
            if !connects(mask, None) {
                return all_edges;
            }
            (0..edges)
                .filter(|&e| !connects(mask, Some(e)))
                .fold(0, |k, e| k | 1 << e)
        })
        .collect();
    let connected = |mask: u32| connects(mask, None);

    let mut assign = vec![0u8; arcs];
    loop {
        let mut m = [0u32; 3];
        for (a, &l) in assign.iter().enumerate() {
            m[l as usize] |= 1 << a;
        }
        let (k1, k2, k3) = (kill[m[0] as usize], kill[m[1] as usize], kill[m[2] as usize]);
        if (k1 & k2) | (k1 & k3) | (k2 & k3) == 0 && m.iter().all(|&x| connected(x)) {
            return Ok(true);
        }
        let mut i = 0;
        loop {
            if i == arcs {
                return Ok(false);
            }
            assign[i] += 1;
            if assign[i] < 3 {
                break;
            }
            assign[i] = 0;
            i += 1;
        }
    }
}
