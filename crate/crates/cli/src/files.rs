//! JSON network and plan files. Nodes and edges are referred to by their
//! string ids everywhere.

use std::collections::{BTreeMap, HashMap, HashSet};

use anyhow::{bail, Context, Result};
use rfd_core::verify::{EdgeSurvival, Violation};
use rfd_core::{
    AuxArc, CodingNetwork, EdgeId, FeasibilityClass, Label, Network, NodeRole, RecoveryPlan, Role,
    VerificationReport,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeEntry>,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub tail: String,
    pub head: String,
    /// Free capacity `k(e)`.
    pub capacity: u32,
}

impl NetworkFile {
    pub fn from_network(net: &Network) -> Self {
        let name = |v: rfd_core::NodeId| net.node_names[v.index()].clone();
        NetworkFile {
            nodes: net.node_names.clone(),
            edges: net
                .graph
                .edges()
                .map(|e| EdgeEntry {
                    id: net.edge_names[e.index()].clone(),
                    tail: name(net.graph.tail(e)),
                    head: name(net.graph.head(e)),
                    capacity: net.free_capacity[e.index()],
                })
                .collect(),
            source: name(net.source),
            target: name(net.target),
        }
    }

    pub fn to_network(&self) -> Result<Network> {
        let mut nodes = HashSet::new();
        let mut b = Network::builder();
        for n in &self.nodes {
            if !nodes.insert(n.as_str()) {
                bail!("node `{n}` is listed twice");
            }
            b.node(n);
        }
        for end in [&self.source, &self.target] {
            if !nodes.contains(end.as_str()) {
                bail!("terminal `{end}` is not a listed node");
            }
        }
        let mut edges = HashSet::new();
        for e in &self.edges {
            if !edges.insert(e.id.as_str()) {
                bail!("edge `{}` is listed twice", e.id);
            }
            for end in [&e.tail, &e.head] {
                if !nodes.contains(end.as_str()) {
                    bail!("edge `{}` uses unknown node `{end}`", e.id);
                }
            }
            b.named_edge(&e.id, &e.tail, &e.head, e.capacity)
                .with_context(|| format!("edge `{}`", e.id))?;
        }
        Ok(b.build(&self.source, &self.target)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcEntry {
    pub edge: String,
    pub copy: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoleEntry {
    pub node: String,
    pub role: Role,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivalEntry {
    pub edge: String,
    pub surviving: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationEntry {
    UnknownArc {
        label: Label,
        edge: String,
        copy: u8,
    },
    SharedArc {
        edge: String,
        copy: u8,
        labels: Vec<Label>,
    },
    Overcapacity {
        edge: String,
        used: usize,
        capacity: u8,
    },
    Disconnected {
        label: Label,
    },
    Vulnerable {
        edge: String,
        surviving: Vec<Label>,
    },
    TerminalMismatch,
}

impl std::fmt::Display for ViolationEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels = |ls: &[Label]| ls.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(", ");
        match self {
            ViolationEntry::UnknownArc { label, edge, copy } => {
                write!(f, "{label} uses copy {copy} of `{edge}`, which has no such copy")
            }
            ViolationEntry::SharedArc {
                edge,
                copy,
                labels: ls,
            } => {
                write!(f, "copy {copy} of `{edge}` is shared by {}", labels(ls))
            }
            ViolationEntry::Overcapacity { edge, used, capacity } => {
                write!(f, "`{edge}` carries {used} arcs but has capacity {capacity}")
            }
            ViolationEntry::Disconnected { label } => write!(f, "{label} does not connect source to target"),
            ViolationEntry::Vulnerable { edge, surviving } => {
                write!(f, "failure of `{edge}` leaves only [{}]", labels(surviving))
            }
            ViolationEntry::TerminalMismatch => write!(f, "plan terminals differ from the network's"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub disjointness_ok: bool,
    pub capacity_ok: bool,
    pub connectivity: BTreeMap<Label, bool>,
    pub survivability: Vec<SurvivalEntry>,
    pub overall: bool,
    pub violations: Vec<ViolationEntry>,
}

impl ReportFile {
    pub fn new(cn: &CodingNetwork, report: &VerificationReport) -> Self {
        let name = |e: EdgeId| {
            if e.index() < cn.graph.edge_count() {
                cn.edge_name(e).to_string()
            } else {
                e.to_string()
            }
        };
        let violations = report
            .violations
            .iter()
            .map(|v| match v {
                Violation::UnknownArc { label, edge, copy } => ViolationEntry::UnknownArc {
                    label: *label,
                    edge: name(*edge),
                    copy: *copy,
                },
                Violation::SharedArc { edge, copy, labels } => ViolationEntry::SharedArc {
                    edge: name(*edge),
                    copy: *copy,
                    labels: labels.clone(),
                },
                Violation::Overcapacity { edge, used, capacity } => ViolationEntry::Overcapacity {
                    edge: name(*edge),
                    used: *used,
                    capacity: *capacity,
                },
                Violation::Disconnected { label } => ViolationEntry::Disconnected { label: *label },
                Violation::Vulnerable { edge, surviving } => ViolationEntry::Vulnerable {
                    edge: name(*edge),
                    surviving: surviving.clone(),
                },
                Violation::TerminalMismatch => ViolationEntry::TerminalMismatch,
            })
            .collect();
        ReportFile {
            disjointness_ok: report.disjointness_ok,
            capacity_ok: report.capacity_ok,
            connectivity: report.connectivity.clone(),
            survivability: report
                .survivability
                .iter()
                .map(|EdgeSurvival { edge, surviving }| SurvivalEntry {
                    edge: name(*edge),
                    surviving: surviving.clone(),
                })
                .collect(),
            overall: report.overall,
            violations,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub class: FeasibilityClass,
    pub subflows: BTreeMap<Label, Vec<ArcEntry>>,
    pub roles: Vec<RoleEntry>,
    pub verification: ReportFile,
}

impl PlanFile {
    pub fn new(cn: &CodingNetwork, plan: &RecoveryPlan, report: &VerificationReport) -> Self {
        PlanFile {
            class: plan.class,
            subflows: Label::ALL
                .into_iter()
                .map(|l| {
                    let arcs = plan
                        .subflow(l)
                        .iter()
                        .map(|a| ArcEntry {
                            edge: cn.edge_name(a.edge).to_string(),
                            copy: a.copy,
                        })
                        .collect();
                    (l, arcs)
                })
                .collect(),
            roles: plan
                .roles
                .iter()
                .map(|r| RoleEntry {
                    node: cn.node_name(r.node).to_string(),
                    role: r.role,
                    label: r.label,
                })
                .collect(),
            verification: ReportFile::new(cn, report),
        }
    }

    /// Resolves the plan's names against `cn`. Unknown edges or nodes mean
    /// the plan belongs to a different network.
    pub fn to_plan(&self, cn: &CodingNetwork) -> Result<RecoveryPlan> {
        let edges: HashMap<&str, EdgeId> = cn.graph.edges().map(|e| (cn.edge_name(e), e)).collect();
        let mut subflows: [Vec<AuxArc>; 3] = Default::default();
        for (label, arcs) in &self.subflows {
            for a in arcs {
                let Some(&edge) = edges.get(a.edge.as_str()) else {
                    bail!("plan uses edge `{}`, which the network does not have", a.edge);
                };
                subflows[label.index()].push(AuxArc { edge, copy: a.copy });
            }
        }
        let roles = self
            .roles
            .iter()
            .map(|r| {
                let node = cn.node_by_name(&r.node).with_context(|| {
                    format!("plan names node `{}`, which the network does not have", r.node)
                })?;
                Ok(NodeRole {
                    node,
                    role: r.role,
                    label: r.label,
                })
            })
            .collect::<Result<_>>()?;
        Ok(RecoveryPlan {
            class: self.class,
            source: cn.source,
            target: cn.target,
            subflows,
            roles,
        })
    }
}
