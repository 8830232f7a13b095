//! Packet-level replay of a recovery plan over GF(2).
//!
//! The source sends A, B and A xor B on their subflows. Relays forward the
//! first copy of a generation they see onto every outgoing arc of the same
//! subflow, which covers both splitting and merging. Arcs of a failed edge
//! drop what they carry. The target decodes from any two labels.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::decompose::{Label, RecoveryPlan};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, NodeId};
use crate::network::CodingNetwork;
use crate::verify::certify_plan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub seq: u64,
    pub payload_a: Vec<u8>,
    pub payload_b: Vec<u8>,
}

impl Generation {
    pub fn new(seq: u64, payload_a: Vec<u8>, payload_b: Vec<u8>) -> Result<Self> {
        if payload_a.len() != payload_b.len() {
            return Err(Error::LengthMismatch(payload_a.len(), payload_b.len()));
        }
        Ok(Generation {
            seq,
            payload_a,
            payload_b,
        })
    }

    pub fn payload_xor(&self) -> Vec<u8> {
        xor(&self.payload_a, &self.payload_b)
    }

    pub fn packets(&self) -> [Packet; 3] {
        [
            Packet {
                label: Label::A,
                seq: self.seq,
                payload: self.payload_a.clone(),
            },
            Packet {
                label: Label::B,
                seq: self.seq,
                payload: self.payload_b.clone(),
            },
            Packet {
                label: Label::Xor,
                seq: self.seq,
                payload: self.payload_xor(),
            },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Packet {
    pub label: Label,
    pub seq: u64,
    pub payload: Vec<u8>,
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// The three packets of generation 0 for payloads `a` and `b`.
pub fn encode(a: &[u8], b: &[u8]) -> Result<[Packet; 3]> {
    Ok(Generation::new(0, a.to_vec(), b.to_vec())?.packets())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecodeRule {
    /// A and B arrived.
    Direct,
    /// B recovered as A xor (A xor B).
    FromAXor,
    /// A recovered as B xor (A xor B).
    FromBXor,
}

/// Recovers `(a, b)` from packets of at least two distinct labels.
pub fn decode(received: &[Packet]) -> Result<(Vec<u8>, Vec<u8>, DecodeRule)> {
    let find = |l: Label| received.iter().find(|p| p.label == l).map(|p| &p.payload);
    let distinct = Label::ALL.iter().filter(|&&l| find(l).is_some()).count();
    let check = |x: &[u8], y: &[u8]| {
        if x.len() == y.len() {
            Ok(())
        } else {
            Err(Error::LengthMismatch(x.len(), y.len()))
        }
    };
    match (find(Label::A), find(Label::B), find(Label::Xor)) {
        (Some(a), Some(b), _) => {
            check(a, b)?;
            Ok((a.clone(), b.clone(), DecodeRule::Direct))
        }
        (Some(a), None, Some(x)) => {
            check(a, x)?;
            Ok((a.clone(), xor(a, x), DecodeRule::FromAXor))
        }
        (None, Some(b), Some(x)) => {
            check(b, x)?;
            Ok((xor(b, x), b.clone(), DecodeRule::FromBXor))
        }
        _ => Err(Error::NotEnoughLabels(distinct)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeliveryOutcome {
    pub failed_edge: Option<EdgeId>,
    pub received_labels: Vec<Label>,
    pub decoded: Option<(Vec<u8>, Vec<u8>)>,
    pub recovered_via: Option<DecodeRule>,
    /// Packets put on arcs, across all subflows.
    pub transmissions: usize,
    /// Largest number of packets any single arc carried.
    pub max_per_arc: usize,
}

impl DeliveryOutcome {
    pub fn recovered(&self, generation: &Generation) -> bool {
        self.decoded
            .as_ref()
            .is_some_and(|(a, b)| *a == generation.payload_a && *b == generation.payload_b)
    }
}

/// A verified plan with per-subflow forwarding tables.
#[derive(Debug, Clone)]
pub struct Simulator<'a> {
    cn: &'a CodingNetwork,
    /// `forward[label][node]`: (arc index, edge, head) triples.
    forward: [Vec<Vec<(usize, EdgeId, NodeId)>>; 3],
    arcs: [usize; 3],
}

impl<'a> Simulator<'a> {
    pub fn new(cn: &'a CodingNetwork, plan: &RecoveryPlan) -> Result<Self> {
        if !certify_plan(cn, plan).overall {
            return Err(Error::UnverifiedPlan);
        }
        let n = cn.graph.node_count();
        let mut forward: [Vec<Vec<(usize, EdgeId, NodeId)>>; 3] = Default::default();
        let mut arcs = [0; 3];
        for label in Label::ALL {
            let table = &mut forward[label.index()];
            table.resize(n, Vec::new());
            for (i, a) in plan.subflow(label).iter().enumerate() {
                let (u, v) = cn.graph.endpoints(a.edge);
                table[u.index()].push((i, a.edge, v));
            }
            arcs[label.index()] = plan.subflow(label).len();
        }
        Ok(Simulator { cn, forward, arcs })
    }

    pub fn transmit(&self, generation: &Generation, failed_edge: Option<EdgeId>) -> DeliveryOutcome {
        let (s, t) = (self.cn.source, self.cn.target);
        let n = self.cn.graph.node_count();
        let mut at_target = Vec::new();
        let mut transmissions = 0;
        let mut max_per_arc = 0;
        for packet in generation.packets() {
            let i = packet.label.index();
            let mut seen = vec![false; n];
            let mut sent = vec![0usize; self.arcs[i]];
            let mut queue = VecDeque::from([s]);
            seen[s.index()] = true;
            while let Some(u) = queue.pop_front() {
                for &(arc, edge, v) in &self.forward[i][u.index()] {
                    sent[arc] += 1;
                    transmissions += 1;
                    if Some(edge) == failed_edge || seen[v.index()] {
                        continue;
                    }
                    seen[v.index()] = true;
                    queue.push_back(v);
                }
            }
            max_per_arc = max_per_arc.max(sent.iter().copied().max().unwrap_or(0));
            if seen[t.index()] {
                at_target.push(packet);
            }
        }
        let received_labels = at_target.iter().map(|p| p.label).collect();
        let (decoded, recovered_via) = match decode(&at_target) {
            Ok((a, b, rule)) => (Some((a, b)), Some(rule)),
            Err(_) => (None, None),
        };
        DeliveryOutcome {
            failed_edge,
            received_labels,
            decoded,
            recovered_via,
            transmissions,
            max_per_arc,
        }
    }

    /// One transmission per edge of the network, each with that edge failed.
    pub fn sweep(&self, generation: &Generation) -> Vec<DeliveryOutcome> {
        self.cn
            .graph
            .edges()
            .map(|e| self.transmit(generation, Some(e)))
            .collect()
    }
}

/// Verifies `plan` and replays one generation.
pub fn simulate_transmission(
    cn: &CodingNetwork,
    plan: &RecoveryPlan,
    generation: &Generation,
    failed_edge: Option<EdgeId>,
) -> Result<DeliveryOutcome> {
    Ok(Simulator::new(cn, plan)?.transmit(generation, failed_edge))
}
