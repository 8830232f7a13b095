//! Instance generators and brute-force oracles shared by the integration
//! tests. Nothing here calls into the algorithms under test.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rfd_core::{CodingNetwork, Digraph, EdgeId, Label, Network, NodeId, RecoveryPlan};

/// A random network on 3 to 12 nodes with `s = n0` and `t` the last node.
///
/// A few random s-t walks are laid down first so that all feasibility
/// classes come up regularly; random extra edges (possibly backward, so
/// cycles appear) go on top. Free capacities range over 0..=3.
pub fn small_network(seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(3..=12);
    let mut edges: Vec<(usize, usize, u32)> = Vec::new();
    let walks = rng.gen_range(0..=4);
    for _ in 0..walks {
        let hops = rng.gen_range(0..=3.min(n - 2));
        let mut inner: Vec<usize> = (1..n - 1).collect();
        inner.shuffle(&mut rng);
        let mut prev = 0;
        for &v in inner.iter().take(hops) {
            edges.push((prev, v, rng.gen_range(1..=2)));
            prev = v;
        }
        edges.push((prev, n - 1, rng.gen_range(1..=2)));
    }
    let extra = rng.gen_range(0..=2 * n);
    for _ in 0..extra {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            edges.push((u, v, rng.gen_range(0..=3)));
        }
    }
    let mut b = Network::builder();
    for v in 0..n {
        b.node(&format!("n{v}"));
    }
    for (u, v, k) in edges {
        b.edge(&format!("n{u}"), &format!("n{v}"), k).unwrap();
    }
    b.build("n0", &format!("n{}", n - 1)).unwrap()
}

/// Minimum s-t cut value by enumerating every node subset.
pub fn min_cut_by_enumeration(g: &Digraph, cap: &[u32], s: NodeId, t: NodeId) -> u32 {
    let others: Vec<NodeId> = g.nodes().filter(|&v| v != s && v != t).collect();
    let mut best = u32::MAX;
    for mask in 0u32..1 << others.len() {
        let mut inside = vec![false; g.node_count()];
        inside[s.index()] = true;
        for (i, v) in others.iter().enumerate() {
            if mask & 1 << i != 0 {
                inside[v.index()] = true;
            }
        }
        best = best.min(crossing_capacity(g, cap, &inside));
    }
    best
}

pub fn crossing_capacity(g: &Digraph, cap: &[u32], inside: &[bool]) -> u32 {
    g.edges()
        .filter(|&e| inside[g.tail(e).index()] && !inside[g.head(e).index()])
        .map(|e| cap[e.index()])
        .sum()
}

/// Length of the longest strictly nested chain of minimum cuts, by brute
/// force over all node subsets.
pub fn longest_min_cut_chain(g: &Digraph, cap: &[u32], s: NodeId, t: NodeId) -> usize {
    let value = min_cut_by_enumeration(g, cap, s, t);
    let others: Vec<NodeId> = g.nodes().filter(|&v| v != s && v != t).collect();
    let mut cuts: Vec<u32> = Vec::new();
    for mask in 0u32..1 << others.len() {
        let mut inside = vec![false; g.node_count()];
        inside[s.index()] = true;
        for (i, v) in others.iter().enumerate() {
            if mask & 1 << i != 0 {
                inside[v.index()] = true;
            }
        }
        if crossing_capacity(g, cap, &inside) == value {
            cuts.push(mask);
        }
    }
    cuts.sort_by_key(|m| m.count_ones());
    let mut best = vec![1usize; cuts.len()];
    for i in 0..cuts.len() {
        for j in 0..i {
            let (a, b) = (cuts[j], cuts[i]);
            if a != b && a & b == a {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Independent plan check: arc-disjointness, capacity, and for every edge
/// (and for no failure) which labels still reach `t` by depth-first search.
pub fn plan_survives_every_failure(cn: &CodingNetwork, plan: &RecoveryPlan) -> bool {
    let mut seen = std::collections::HashSet::new();
    let mut used = vec![0u8; cn.graph.edge_count()];
    for label in Label::ALL {
        for a in plan.subflow(label) {
            if a.edge.index() >= used.len() || a.copy >= cn.capacity[a.edge.index()] {
                return false;
            }
            if !seen.insert(*a) {
                return false;
            }
            used[a.edge.index()] += 1;
        }
    }
    if used.iter().zip(&cn.capacity).any(|(u, c)| u > c) {
        return false;
    }
    let reaches = |label: Label, failed: Option<EdgeId>| {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); cn.graph.node_count()];
        for a in plan.subflow(label) {
            if Some(a.edge) != failed {
                adj[cn.graph.tail(a.edge).index()].push(cn.graph.head(a.edge));
            }
        }
        let mut stack = vec![cn.source];
        let mut visited = vec![false; cn.graph.node_count()];
        visited[cn.source.index()] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u.index()] {
                if !visited[w.index()] {
                    visited[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        visited[cn.target.index()]
    };
    if !Label::ALL.iter().all(|&l| reaches(l, None)) {
        return false;
    }
    cn.graph
        .edges()
        .all(|e| Label::ALL.iter().filter(|&&l| reaches(l, Some(e))).count() >= 2)
}

/// Fewest edge-units needed to route `paths` arc-disjoint s-t paths under the
/// coding capacities, by successive shortest paths with Bellman-Ford.
pub fn min_cost_paths(cn: &CodingNetwork, paths: u32) -> Option<usize> {
    let g = &cn.graph;
    let n = g.node_count();
    let mut flow = vec![0u32; g.edge_count()];
    let mut cost = 0i64;
    for _ in 0..paths {
        let mut dist = vec![i64::MAX; n];
        let mut via: Vec<Option<(EdgeId, bool)>> = vec![None; n];
        dist[cn.source.index()] = 0;
        for _ in 0..n {
            let mut changed = false;
            for e in g.edges() {
                let (u, v) = g.endpoints(e);
                let mut relax = |a: NodeId, b: NodeId, w: i64, forward: bool| {
                    if dist[a.index()] != i64::MAX && dist[a.index()] + w < dist[b.index()] {
                        dist[b.index()] = dist[a.index()] + w;
                        via[b.index()] = Some((e, forward));
                        changed = true;
                    }
                };
                if flow[e.index()] < cn.capacity[e.index()] as u32 {
                    relax(u, v, 1, true);
                }
                if flow[e.index()] > 0 {
                    relax(v, u, -1, false);
                }
            }
            if !changed {
                break;
            }
        }
        if dist[cn.target.index()] == i64::MAX {
            return None;
        }
        cost += dist[cn.target.index()];
        let mut v = cn.target;
        while v != cn.source {
            let (e, forward) = via[v.index()].unwrap();
            if forward {
                flow[e.index()] += 1;
                v = g.tail(e);
            } else {
                flow[e.index()] -= 1;
                v = g.head(e);
            }
        }
    }
    Some(cost as usize)
}
