//! Seeded generators of test networks.
//!
//! `Ladder` chains small gadgets between alternating 2-edge and 3-arc cuts,
//! so every segment type shows up and the size is exact. `RandomDag` samples
//! sparse DAGs until one has the requested class. `ParallelPaths` is a
//! bundle of internally disjoint thin paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::conditioning::{classify_feasibility, derive_coding_capacities, FeasibilityClass};
use crate::error::{Error, Result};
use crate::network::Network;

/// Attempts `RandomDag` makes before giving up.
pub const MAX_ATTEMPTS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Structure {
    Ladder,
    RandomDag,
    ParallelPaths,
}

impl std::str::FromStr for Structure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ladder" => Ok(Structure::Ladder),
            "random_dag" => Ok(Structure::RandomDag),
            "parallel_paths" => Ok(Structure::ParallelPaths),
            _ => Err(format!("unknown structure `{s}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub structure: Structure,
    pub node_count: usize,
    pub target_class: FeasibilityClass,
    pub seed: u64,
    /// Probability that a ladder cut is a 2-edge-cut.
    pub two_edge_ratio: f64,
    /// Probability that a thin edge inside a ladder gadget is made thick.
    /// Such edges are redundant and get demoted during conditioning.
    pub interior_boost: f64,
}

impl GenParams {
    pub fn new(structure: Structure, node_count: usize, target_class: FeasibilityClass, seed: u64) -> Self {
        GenParams {
            structure,
            node_count,
            target_class,
            seed,
            two_edge_ratio: 0.5,
            interior_boost: 0.0,
        }
    }
}

pub fn generate(params: &GenParams) -> Result<Network> {
    if params.node_count < 2 {
        return Err(Error::GenerationFailed {
            attempts: 0,
            reason: "a network needs at least two nodes".into(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    match params.structure {
        Structure::Ladder => ladder(params, &mut rng),
        Structure::RandomDag => random_dag(params, &mut rng),
        Structure::ParallelPaths => Ok(parallel_paths(params)),
    }
}

/// Nodes 0 and 1 are `s` and `t`.
struct Draft {
    nodes: usize,
    edges: Vec<(usize, usize, u32)>,
}

impl Draft {
    fn new() -> Self {
        Draft {
            nodes: 2,
            edges: Vec::new(),
        }
    }

    fn node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    /// Names nodes in a shuffled order when `rng` is given, so tie-breaking
    /// by id does not follow the construction order.
    fn finish(self, rng: Option<&mut ChaCha8Rng>) -> Network {
        let mut order: Vec<usize> = (0..self.nodes).collect();
        let mut edges = self.edges;
        if let Some(rng) = rng {
            order.shuffle(rng);
            edges.shuffle(rng);
        }
        let name = |v: usize| match v {
            0 => "s".to_string(),
            1 => "t".to_string(),
            _ => format!("v{}", v - 2),
        };
        let mut b = Network::builder();
        for &v in &order {
            b.node(&name(v));
        }
        for (i, &(u, v, k)) in edges.iter().enumerate() {
            b.named_edge(&format!("e{i}"), &name(u), &name(v), k)
                .expect("generated edge joins distinct nodes");
        }
        b.build("s", "t").expect("distinct terminals")
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Two,
    Three,
}

fn gadget_size(entry: Kind, exit: Kind) -> usize {
    match (entry, exit) {
        (Kind::Three, Kind::Three) => 6,
        (Kind::Two, Kind::Two) => 4,
        _ => 3,
    }
}

fn ladder(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Network> {
    if params.target_class != FeasibilityClass::NetworkCoding {
        return Err(Error::GenerationFailed {
            attempts: 0,
            reason: format!("ladders are always NETWORK_CODING, not {}", params.target_class),
        });
    }
    let pick = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(params.two_edge_ratio.clamp(0.0, 1.0)) {
            Kind::Two
        } else {
            Kind::Three
        }
    };
    let n = params.node_count;
    let mut kinds = vec![pick(rng)];
    let mut used = 2;
    loop {
        let last = *kinds.last().expect("at least one cut");
        let first = pick(rng);
        let other = if first == Kind::Two {
            Kind::Three
        } else {
            Kind::Two
        };
        let next = [first, other]
            .into_iter()
            .find(|&k| used + gadget_size(last, k) <= n);
        match next {
            Some(k) => {
                used += gadget_size(last, k);
                kinds.push(k);
            }
            None => break,
        }
    }

    let mut d = Draft::new();
    let boost = params.interior_boost.clamp(0.0, 1.0);
    let inner = |rng: &mut ChaCha8Rng| if rng.gen_bool(boost) { 2 } else { 1 };
    let cut_edge = |rng: &mut ChaCha8Rng, kind: Kind| match kind {
        Kind::Two => rng.gen_range(2..=4),
        Kind::Three => 1,
    };
    let width = |k: Kind| if k == Kind::Two { 2 } else { 3 };
    let mut exits: Vec<usize> = vec![0; width(kinds[0])];
    for w in kinds.windows(2) {
        let (entry_kind, exit_kind) = (w[0], w[1]);
        let (mut entries, next_exits, internal) = match (entry_kind, exit_kind) {
            (Kind::Three, Kind::Three) => {
                let x = [d.node(), d.node(), d.node()];
                let y = [d.node(), d.node(), d.node()];
                let internal: Vec<(usize, usize)> = (0..3)
                    .flat_map(|i| [(x[i], y[i]), (x[i], y[(i + 1) % 3])])
                    .collect();
                (x.to_vec(), y.to_vec(), internal)
            }
            (Kind::Two, Kind::Two) => {
                let (a, c, a2, c2) = (d.node(), d.node(), d.node(), d.node());
                (vec![a, c], vec![a2, c2], vec![(a, a2), (a, c2), (c, c2), (c, a2)])
            }
            (Kind::Two, Kind::Three) => {
                let (a, b, c) = (d.node(), d.node(), d.node());
                (vec![a, c], vec![a, b, c], vec![(a, b), (c, b)])
            }
            (Kind::Three, Kind::Two) => {
                let (p, q, r) = (d.node(), d.node(), d.node());
                (vec![p, q, r], vec![p, r], vec![(q, p), (q, r)])
            }
        };
        entries.shuffle(rng);
        for (&u, &v) in exits.iter().zip(&entries) {
            let k = cut_edge(rng, entry_kind);
            d.edges.push((u, v, k));
        }
        for (u, v) in internal {
            let k = inner(rng);
            d.edges.push((u, v, k));
        }
        exits = next_exits;
    }
    let last = *kinds.last().expect("at least one cut");
    for &u in &exits {
        let k = cut_edge(rng, last);
        d.edges.push((u, 1, k));
    }

    for _ in used..n {
        let i = rng.gen_range(0..d.edges.len());
        let (u, v, k) = d.edges[i];
        let x = d.node();
        d.edges[i] = (u, x, k);
        d.edges.push((x, v, k));
    }
    Ok(d.finish(Some(rng)))
}

fn random_dag(params: &GenParams, rng: &mut ChaCha8Rng) -> Result<Network> {
    let n = params.node_count;
    for _ in 0..MAX_ATTEMPTS {
        let degree: f64 = rng.gen_range(1.0..3.5);
        let thick: f64 = rng.gen_range(0.0..0.6);
        let m = ((degree * n as f64).round() as usize).max(1);
        // Topological positions: s first, t last.
        let mut topo: Vec<usize> = (2..n).collect();
        topo.shuffle(rng);
        topo.insert(0, 0);
        topo.push(1);
        let mut d = Draft {
            nodes: n,
            edges: Vec::with_capacity(m),
        };
        for _ in 0..m {
            let i = rng.gen_range(0..n - 1);
            let j = rng.gen_range(i + 1..n);
            let k = if rng.gen_bool(thick) {
                rng.gen_range(2..=3)
            } else {
                1
            };
            d.edges.push((topo[i], topo[j], k));
        }
        let net = d.finish(None);
        let class = classify_feasibility(&derive_coding_capacities(&net))?.class;
        if class == params.target_class {
            return Ok(net);
        }
    }
    Err(Error::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!("no random DAG with class {}", params.target_class),
    })
}

fn parallel_paths(params: &GenParams) -> Network {
    let paths = match params.target_class {
        FeasibilityClass::Infeasible => 1,
        FeasibilityClass::Unprotected2Flow => 2,
        FeasibilityClass::NetworkCoding => 3,
        FeasibilityClass::DiversityCoding => 4,
    };
    let mut interior: Vec<Vec<usize>> = vec![Vec::new(); paths];
    for v in 2..params.node_count {
        interior[(v - 2) % paths].push(v);
    }
    let mut d = Draft {
        nodes: params.node_count,
        edges: Vec::new(),
    };
    for hops in &interior {
        let mut prev = 0;
        for &v in hops {
            d.edges.push((prev, v, 1));
            prev = v;
        }
        d.edges.push((prev, 1, 1));
    }
    d.finish(None)
}
