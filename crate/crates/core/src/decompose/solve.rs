use std::collections::VecDeque;

use crate::decompose::segment::{ArcRef, Segment, SegmentType};
use crate::error::{Error, Result};
use crate::graph::{edge_disjoint_paths, Digraph, Direction, EdgeId, NodeId};

/// Three pairwise arc-disjoint arc sets of one segment, each connecting
/// `s_i` to `t_i`.
///
/// When `dominant` is set, `sets[0]` crosses every 2-edge boundary of the
/// segment on one arc of each edge. `merger` and `splitter` are the network
/// nodes where that set joins or forks inside a Type III or IV segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentSolution {
    pub sets: [Vec<ArcRef>; 3],
    pub dominant: bool,
    pub merger: Option<NodeId>,
    pub splitter: Option<NodeId>,
}

pub fn solve_segment(seg: &Segment) -> Result<SegmentSolution> {
    let infeasible = |reason: String| Error::SegmentInfeasible {
        segment: seg.region,
        reason,
    };
    let paths = |g: &Digraph, s: NodeId, t: NodeId, want: usize| {
        edge_disjoint_paths(g, s, t, want).map_err(|e| infeasible(e.to_string()))
    };
    let (local, dominant, merger, splitter) = match seg.segment_type {
        SegmentType::I => {
            let p = paths(&seg.graph, Segment::SOURCE, Segment::SINK, 3)?;
            ([p[0].clone(), p[1].clone(), p[2].clone()], false, None, None)
        }
        SegmentType::II => {
            let p = paths(&seg.graph, Segment::SOURCE, Segment::SINK, 4)?;
            let (a, b) = dominant_pair(seg, &p)
                .ok_or_else(|| infeasible("no pair of paths avoids both copies of an edge".into()))?;
            let rest: Vec<usize> = (0..4).filter(|&i| i != a && i != b).collect();
            let mut first = p[a].clone();
            first.extend_from_slice(&p[b]);
            ([first, p[rest[0]].clone(), p[rest[1]].clone()], true, None, None)
        }
        SegmentType::III => {
            let p = paths(&seg.graph, Segment::SOURCE, Segment::SINK, 3)?;
            let (sets, m) =
                merge_construction(seg, &seg.graph, Segment::SOURCE, Segment::SINK, p).map_err(infeasible)?;
            (sets, true, seg.global(m), None)
        }
        SegmentType::IV => {
            let rev = seg.graph.reversed();
            let p = paths(&rev, Segment::SINK, Segment::SOURCE, 3)?;
            let (sets, m) =
                merge_construction(seg, &rev, Segment::SINK, Segment::SOURCE, p).map_err(infeasible)?;
            (sets, true, None, seg.global(m))
        }
    };
    let sets = local.map(|set| {
        let mut arcs: Vec<ArcRef> = set.iter().map(|e| seg.arcs[e.index()]).collect();
        arcs.sort();
        arcs
    });
    Ok(SegmentSolution {
        sets,
        dominant,
        merger,
        splitter,
    })
}

/// First pair in lexicographic order whose union never holds both copies
/// of one edge.
fn dominant_pair(seg: &Segment, paths: &[Vec<EdgeId>]) -> Option<(usize, usize)> {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    PAIRS.into_iter().find(|&(a, b)| {
        let mut edges: Vec<EdgeId> = paths[a]
            .iter()
            .chain(&paths[b])
            .filter_map(|e| seg.edge_of[e.index()])
            .collect();
        edges.sort();
        edges.windows(2).all(|w| w[0] != w[1])
    })
}

/// The Type III construction on `g`, a segment or its reversal, entered
/// through a 2-edge-cut at `s` and left through a 3-arc-cut at `t`.
///
/// Of the three paths, two enter on copies of one edge `f` and one on an
/// arc of the other edge `g`, reaching node `v`. A BFS from `v` that may
/// undo arcs of the third path finds the nearest node `m` of the first two
/// paths. The dominant set is the path through `m`, the spare copy of `g`,
/// and a `v-m` branch; the third set takes the remaining `v-t` route.
fn merge_construction(
    seg: &Segment,
    g: &Digraph,
    s: NodeId,
    t: NodeId,
    mut p: Vec<Vec<EdgeId>>,
) -> std::result::Result<([Vec<EdgeId>; 3], NodeId), String> {
    let group = |e: EdgeId| seg.edge_of[e.index()];
    let shared = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]
        .into_iter()
        .find(|&(a, b, _)| group(p[a][0]).is_some() && group(p[a][0]) == group(p[b][0]))
        .ok_or("entry paths do not share a 2-edge-cut edge")?;
    let p3 = std::mem::take(&mut p[shared.2]);
    let mut p2 = std::mem::take(&mut p[shared.1]);
    let mut p1 = std::mem::take(&mut p[shared.0]);

    let g_arc = p3[0];
    let spare = g
        .out_edges(s)
        .iter()
        .copied()
        .find(|&e| e != g_arc && group(e) == group(g_arc))
        .ok_or("entry edge has no second copy")?;
    let v = g.head(g_arc);
    let tail_path = &p3[1..];

    let n = g.node_count();
    let mut on_p1 = vec![false; n];
    let mut on_p2 = vec![false; n];
    for &e in &p1 {
        on_p1[g.head(e).index()] = true;
    }
    for &e in &p2 {
        on_p2[g.head(e).index()] = true;
    }
    let mut in_p = vec![false; g.edge_count()];
    for &e in tail_path {
        in_p[e.index()] = true;
    }

    let touches = |w: NodeId| on_p1[w.index()] || on_p2[w.index()];
    let mut parent: Vec<Option<(EdgeId, Direction)>> = vec![None; n];
    let m = if touches(v) {
        v
    } else {
        let mut seen = vec![false; n];
        seen[v.index()] = true;
        let mut queue = VecDeque::from([v]);
        let mut found = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for &(e, dir) in g.incident(x) {
                let w = match dir {
                    Direction::Forward if !in_p[e.index()] => g.head(e),
                    Direction::Backward if in_p[e.index()] => g.tail(e),
                    _ => continue,
                };
                if w == s || seen[w.index()] {
                    continue;
                }
                seen[w.index()] = true;
                parent[w.index()] = Some((e, dir));
                if touches(w) {
                    found = Some(w);
                    break 'bfs;
                }
                queue.push_back(w);
            }
        }
        found.ok_or("no augmenting path from the g-branch reaches the f-paths")?
    };
    if m == t {
        return Err("augmenting path ends at the segment sink".into());
    }
    if !on_p2[m.index()] {
        std::mem::swap(&mut p1, &mut p2);
    }

    // F2 = P xor augmenting path: a 2-unit flow from v to t and m.
    let mut x = m;
    while let Some((e, dir)) = parent[x.index()] {
        match dir {
            Direction::Forward => {
                in_p[e.index()] = true;
                x = g.tail(e);
            }
            Direction::Backward => {
                in_p[e.index()] = false;
                x = g.head(e);
            }
        }
        if x == v {
            break;
        }
    }
    let q = take_path(g, &mut in_p, v, m).ok_or("no v-m branch in the augmented flow")?;
    let q_rest = take_path(g, &mut in_p, v, t).ok_or("no v-t branch in the augmented flow")?;

    let mut dominant = p2;
    dominant.push(spare);
    dominant.extend(q);
    let mut third = vec![g_arc];
    third.extend(q_rest);
    Ok(([dominant, p1, third], m))
}

/// Removes and returns a shortest `from-to` path over edges flagged in
/// `avail`.
fn take_path(g: &Digraph, avail: &mut [bool], from: NodeId, to: NodeId) -> Option<Vec<EdgeId>> {
    if from == to {
        return Some(Vec::new());
    }
    let mut via: Vec<Option<EdgeId>> = vec![None; g.node_count()];
    let mut seen = vec![false; g.node_count()];
    seen[from.index()] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &e in g.out_edges(u) {
            let w = g.head(e);
            if avail[e.index()] && !seen[w.index()] {
                seen[w.index()] = true;
                via[w.index()] = Some(e);
                queue.push_back(w);
            }
        }
    }
    if !seen[to.index()] {
        return None;
    }
    let mut path = Vec::new();
    let mut x = to;
    while x != from {
        let e = via[x.index()].expect("BFS tree edge");
        avail[e.index()] = false;
        path.push(e);
        x = g.tail(e);
    }
    path.reverse();
    Some(path)
}

/// Whether every set connects `s_i` to `t_i` and, for each network edge
/// of the segment, at least two sets still do after losing its arcs.
pub fn locally_feasible(seg: &Segment, sol: &SegmentSolution) -> bool {
    let label: std::collections::HashMap<ArcRef, usize> = sol
        .sets
        .iter()
        .enumerate()
        .flat_map(|(i, set)| set.iter().map(move |&a| (a, i)))
        .collect();
    let count: usize = sol.sets.iter().map(Vec::len).sum();
    if label.len() != count {
        return false;
    }
    let connects = |i: usize, failed: Option<EdgeId>| {
        let reach = seg.graph.reachable_from(Segment::SOURCE, |e| {
            label.get(&seg.arcs[e.index()]) == Some(&i)
                && (failed.is_none() || seg.edge_of[e.index()] != failed)
        });
        reach[Segment::SINK.index()]
    };
    if !(0..3).all(|i| connects(i, None)) {
        return false;
    }
    let mut edges: Vec<EdgeId> = seg.edge_of.iter().flatten().copied().collect();
    edges.sort();
    edges.dedup();
    edges
        .into_iter()
        .all(|e| (0..3).filter(|&i| connects(i, Some(e))).count() >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditioning::{condition_network, derive_coding_capacities};
    use crate::decompose::auxiliary::build_auxiliary;
    use crate::decompose::segment::extract_segments;
    use crate::fixtures;
    use crate::network::Network;

    fn solved(net: Network) -> (crate::network::CodingNetwork, Vec<Segment>, Vec<SegmentSolution>) {
        let c = condition_network(&derive_coding_capacities(&net)).unwrap();
        let aux = build_auxiliary(&c.network);
        let segs = extract_segments(&c.network, &c.chain, &aux).unwrap();
        let sols: Vec<_> = segs.iter().map(|s| solve_segment(s).unwrap()).collect();
        (c.network, segs, sols)
    }

    #[test]
    fn every_fixture_segment_is_locally_feasible() {
        for net in [
            fixtures::fig1(),
            fixtures::diamond2(),
            fixtures::tripath(),
            fixtures::two_stage(),
            fixtures::slack_source(),
        ] {
            let (_, segs, sols) = solved(net);
            for (seg, sol) in segs.iter().zip(&sols) {
                assert!(locally_feasible(seg, sol), "segment {}", seg.region);
                let dominant = seg.segment_type != SegmentType::I;
                assert_eq!(sol.dominant, dominant);
            }
        }
    }

    #[test]
    fn diamond_dominant_mixes_branches() {
        let (cn, segs, sols) = solved(fixtures::diamond2());
        let aux = build_auxiliary(&cn);
        for (seg, sol) in segs.iter().zip(&sols) {
            assert_eq!(seg.segment_type, SegmentType::II);
            let mut edges: Vec<EdgeId> = sol.sets[0]
                .iter()
                .map(|a| aux.arc(a.aux().unwrap()).edge)
                .collect();
            let arcs = edges.len();
            edges.sort();
            edges.dedup();
            assert_eq!(edges.len(), arcs, "never both copies of one edge");
            assert_eq!(arcs, 3);
        }
    }

    #[test]
    fn fig1_type_three_merges_at_b3() {
        let (cn, segs, sols) = solved(fixtures::fig1());
        let (seg, sol) = segs
            .iter()
            .zip(&sols)
            .find(|(s, _)| s.segment_type == SegmentType::III)
            .unwrap();
        let m = sol.merger.unwrap();
        assert_eq!(cn.node_name(m), "b3");
        assert_eq!(sol.splitter, None);
        // The three sets leave through three different exit arcs.
        let exits: Vec<usize> = sol
            .sets
            .iter()
            .map(|set| {
                set.iter()
                    .filter(|a| {
                        let i = seg.arcs.iter().position(|x| x == *a).unwrap();
                        seg.graph.head(EdgeId(i as u32)) == Segment::SINK
                    })
                    .count()
            })
            .collect();
        assert_eq!(exits, [1, 1, 1]);
    }

    #[test]
    fn fig1_first_segment_splits_at_b0() {
        let (cn, segs, sols) = solved(fixtures::fig1());
        assert_eq!(segs[0].segment_type, SegmentType::IV);
        let p = sols[0].splitter.unwrap();
        assert_eq!(cn.node_name(p), "b0");
    }
}
