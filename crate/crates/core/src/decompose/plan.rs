use std::fmt;

use serde::{Deserialize, Serialize};

use crate::conditioning::FeasibilityClass;
use crate::decompose::auxiliary::AuxArc;
use crate::graph::NodeId;
use crate::network::CodingNetwork;

/// The data carried by a subflow: part A, part B, or their bytewise XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Label {
    A,
    B,
    #[serde(rename = "XOR")]
    Xor,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::A, Label::B, Label::Xor];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::A => "A",
            Label::B => "B",
            Label::Xor => "XOR",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Label::ALL
            .into_iter()
            .find(|l| l.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    /// Duplicates each packet of the subflow onto its outgoing arcs.
    Splitter,
    /// Forwards the first copy of each packet arriving on its incoming arcs.
    Merger,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Splitter => "SPLITTER",
            Role::Merger => "MERGER",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeRole {
    pub node: NodeId,
    pub role: Role,
    pub label: Label,
}

/// Three labeled, pairwise arc-disjoint subflows of a coding network.
///
/// The source sends A, B and A xor B on the subflows of the same label;
/// the target decodes from whichever two arrive. Relays only split or
/// merge, as listed in `roles`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveryPlan {
    pub class: FeasibilityClass,
    pub source: NodeId,
    pub target: NodeId,
    pub subflows: [Vec<AuxArc>; 3],
    pub roles: Vec<NodeRole>,
}

impl RecoveryPlan {
    pub fn subflow(&self, label: Label) -> &[AuxArc] {
        &self.subflows[label.index()]
    }

    pub fn arc_count(&self) -> usize {
        self.subflows.iter().map(Vec::len).sum()
    }

    pub fn roles_of(&self, label: Label) -> impl Iterator<Item = &NodeRole> {
        self.roles.iter().filter(move |r| r.label == label)
    }
}

/// Labels the sets and derives relay roles.
///
/// The set named by `dominant` becomes XOR and the others A and B, ordered
/// by their smallest arc. Without a dominant set all three are ordered that
/// way. Any node with two or more outgoing arcs in a subflow splits it; two
/// or more incoming arcs make it a merger.
pub fn assign_roles(
    cn: &CodingNetwork,
    sets: [Vec<AuxArc>; 3],
    dominant: Option<usize>,
    class: FeasibilityClass,
) -> RecoveryPlan {
    let mut sets = sets.map(|mut s| {
        s.sort();
        s
    });
    let mut order: Vec<usize> = (0..3).filter(|&i| Some(i) != dominant).collect();
    order.sort_by_key(|&i| sets[i].first().copied());
    if let Some(d) = dominant {
        order.push(d);
    }
    let subflows: [Vec<AuxArc>; 3] = [0, 1, 2].map(|j| std::mem::take(&mut sets[order[j]]));

    let n = cn.graph.node_count();
    let mut roles = Vec::new();
    for label in Label::ALL {
        let mut out_deg = vec![0u32; n];
        let mut in_deg = vec![0u32; n];
        for a in &subflows[label.index()] {
            let (u, v) = cn.graph.endpoints(a.edge);
            out_deg[u.index()] += 1;
            in_deg[v.index()] += 1;
        }
        for v in cn.graph.nodes() {
            if out_deg[v.index()] >= 2 {
                roles.push(NodeRole {
                    node: v,
                    role: Role::Splitter,
                    label,
                });
            }
            if in_deg[v.index()] >= 2 {
                roles.push(NodeRole {
                    node: v,
                    role: Role::Merger,
                    label,
                });
            }
        }
    }
    roles.sort();
    RecoveryPlan {
        class,
        source: cn.source,
        target: cn.target,
        subflows,
        roles,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::derive_coding_capacities;
    use crate::fixtures;
    use crate::graph::EdgeId;

    fn arc(e: u32, copy: u8) -> AuxArc {
        AuxArc {
            edge: EdgeId(e),
            copy,
        }
    }

    #[test]
    fn disjoint_paths_have_no_relays() {
        let cn = derive_coding_capacities(&fixtures::tripath());
        let sets = [
            vec![arc(2, 0), arc(5, 0)],
            vec![arc(0, 0), arc(3, 0)],
            vec![arc(1, 0), arc(4, 0)],
        ];
        let plan = assign_roles(&cn, sets, None, FeasibilityClass::NetworkCoding);
        assert!(plan.roles.is_empty());
        assert_eq!(plan.subflow(Label::A)[0], arc(0, 0));
        assert_eq!(plan.subflow(Label::B)[0], arc(1, 0));
        assert_eq!(plan.subflow(Label::Xor)[0], arc(2, 0));
    }

    #[test]
    fn dominant_set_is_xor() {
        let cn = derive_coding_capacities(&fixtures::diamond2());
        let sets = [
            vec![arc(0, 1), arc(2, 1)],
            vec![arc(0, 0), arc(1, 0), arc(2, 0), arc(3, 0)],
            vec![arc(1, 1), arc(3, 1)],
        ];
        let plan = assign_roles(&cn, sets, Some(1), FeasibilityClass::NetworkCoding);
        assert_eq!(plan.subflow(Label::Xor).len(), 4);
        let xor: Vec<_> = plan.roles_of(Label::Xor).map(|r| (r.node, r.role)).collect();
        assert_eq!(xor, [(cn.source, Role::Splitter), (cn.target, Role::Merger)]);
        assert_eq!(plan.roles.len(), 2);
    }

    #[test]
    fn label_strings() {
        assert_eq!(serde_json::to_string(&Label::Xor).unwrap(), "\"XOR\"");
        assert_eq!("xor".parse::<Label>(), Ok(Label::Xor));
        assert_eq!(serde_json::to_string(&Role::Merger).unwrap(), "\"MERGER\"");
    }
}
