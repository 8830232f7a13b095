use std::collections::HashMap;

use crate::cut_chain::{CutChain, CutKind};
use crate::decompose::auxiliary::{AuxArc, AuxiliaryGraph};
use crate::decompose::segment::{ArcRef, Segment};
use crate::decompose::solve::SegmentSolution;
use crate::error::{Error, Result};
use crate::graph::EdgeId;

const UNSET: u8 = u8::MAX;

/// Three global arc sets, and the index of the set that is dominant at the
/// first 2-edge-cut of the chain, if there is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluedSets {
    pub sets: [Vec<AuxArc>; 3],
    pub dominant: Option<usize>,
}

/// Joins segment solutions along their shared boundary arcs.
///
/// The first segment fixes the labels: a dominant set gets label 0, other
/// sets are numbered by their smallest arc. Every later segment is relabeled
/// to agree with the arcs of its entry cut. At a 2-edge-cut, the copies of
/// a boundary edge may be exchanged throughout the later segment so that
/// non-dominant sets meet on the same copy.
pub fn glue_segments(
    segments: &[Segment],
    solutions: &[SegmentSolution],
    chain: &CutChain,
    aux: &AuxiliaryGraph,
) -> Result<GluedSets> {
    let mut label = vec![UNSET; aux.arc_count()];
    for (i, (seg, sol)) in segments.iter().zip(solutions).enumerate() {
        let mismatch = |reason: String| Error::GlueMismatch {
            segment: seg.region,
            reason,
        };
        let mut local: HashMap<EdgeId, u8> = HashMap::new();
        for (l, set) in sol.sets.iter().enumerate() {
            for a in set.iter().filter_map(|a| a.aux()) {
                local.insert(a, l as u8);
            }
        }
        let local_of = |a: EdgeId| {
            local
                .get(&a)
                .copied()
                .ok_or_else(|| mismatch(format!("boundary arc {a} is unused downstream")))
        };
        let global_of = |a: EdgeId| match label[a.index()] {
            UNSET => Err(mismatch(format!("boundary arc {a} is unused upstream"))),
            l => Ok(l),
        };

        let mut perm = [UNSET; 3];
        let mut swapped: Vec<EdgeId> = Vec::new();
        if i == 0 {
            let min_arc = |l: usize| sol.sets[l].iter().filter_map(|a| a.aux()).min();
            let mut order: Vec<usize> = if sol.dominant { vec![1, 2] } else { vec![0, 1, 2] };
            order.sort_by_key(|&l| min_arc(l));
            let offset = usize::from(sol.dominant);
            if sol.dominant {
                perm[0] = 0;
            }
            for (j, &l) in order.iter().enumerate() {
                perm[l] = (j + offset) as u8;
            }
        } else {
            let cut = seg
                .entry
                .cut
                .ok_or_else(|| mismatch("interior segment without an entry cut".into()))?;
            let crossing = &chain.crossing[cut];
            let arc = |e: EdgeId, copy: u8| {
                aux.arc_id(e, copy)
                    .ok_or_else(|| mismatch(format!("edge {e} has no copy {copy}")))
            };
            let bind = |perm: &mut [u8; 3], l: u8, gl: u8| {
                if perm[l as usize] != UNSET && perm[l as usize] != gl {
                    return Err(mismatch(format!("set {l} meets two upstream sets")));
                }
                perm[l as usize] = gl;
                Ok(())
            };
            match seg.entry.kind {
                CutKind::ThreeArc => {
                    for &e in crossing {
                        let a = arc(e, 0)?;
                        bind(&mut perm, local_of(a)?, global_of(a)?)?;
                    }
                }
                CutKind::TwoEdge => {
                    let [f, g] = crossing[..] else {
                        return Err(mismatch("2-edge-cut without two edges".into()));
                    };
                    let fa = [arc(f, 0)?, arc(f, 1)?];
                    let ga = [arc(g, 0)?, arc(g, 1)?];
                    let gf = [global_of(fa[0])?, global_of(fa[1])?];
                    let gg = [global_of(ga[0])?, global_of(ga[1])?];
                    let lf = [local_of(fa[0])?, local_of(fa[1])?];
                    let lg = [local_of(ga[0])?, local_of(ga[1])?];
                    let split = |a: [u8; 2], b: [u8; 2]| -> Option<(u8, u8, u8)> {
                        let d = *a.iter().find(|x| b.contains(x))?;
                        let x = *a.iter().find(|&&y| y != d)?;
                        let y = *b.iter().find(|&&y| y != d)?;
                        (x != y).then_some((d, x, y))
                    };
                    let (gd, gx, gy) =
                        split(gf, gg).ok_or_else(|| mismatch("upstream sets lack a dominant set".into()))?;
                    let (ld, lx, ly) = split(lf, lg)
                        .ok_or_else(|| mismatch("downstream sets lack a dominant set".into()))?;
                    bind(&mut perm, ld, gd)?;
                    bind(&mut perm, lx, gx)?;
                    bind(&mut perm, ly, gy)?;
                    if perm[lf[0] as usize] != gf[0] {
                        swapped.push(f);
                    }
                    if perm[lg[0] as usize] != gg[0] {
                        swapped.push(g);
                    }
                }
            }
            if perm.contains(&UNSET) {
                return Err(mismatch("entry cut does not determine every set".into()));
            }
        }

        for (l, set) in sol.sets.iter().enumerate() {
            let gl = perm[l];
            for a in set.iter().filter_map(|a: &ArcRef| a.aux()) {
                let arc = aux.arc(a);
                let target = if swapped.contains(&arc.edge) {
                    aux.arc_id(arc.edge, 1 - arc.copy)
                        .expect("swapped edge has two copies")
                } else {
                    a
                };
                match label[target.index()] {
                    UNSET => label[target.index()] = gl,
                    old if old == gl => {}
                    _ => return Err(mismatch(format!("arc {target} gets two labels"))),
                }
            }
        }
    }

    let mut sets: [Vec<AuxArc>; 3] = Default::default();
    for (a, &l) in label.iter().enumerate() {
        if l != UNSET {
            sets[l as usize].push(aux.arcs[a]);
        }
    }
    let dominant = chain
        .kinds
        .iter()
        .position(|&k| k == CutKind::TwoEdge)
        .and_then(|cut| {
            let [f, g] = chain.crossing[cut][..] else {
                return None;
            };
            let labels = |e: EdgeId| -> Vec<u8> { aux.arcs_of(e).map(|a| label[a.index()]).collect() };
            let lf = labels(f);
            labels(g)
                .into_iter()
                .find(|l| *l != UNSET && lf.contains(l))
                .map(usize::from)
        });
    Ok(GluedSets { sets, dominant })
}
