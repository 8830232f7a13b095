//! Small reference networks used throughout the tests and the CLI examples.
//!
//! Edges are named `tail-head`. Free capacities are given in the input
//! model, so thick edges have `k = 2` and thin edges `k = 1`.

use crate::network::Network;

fn build(edges: &[(&str, &str, u32)]) -> Network {
    let mut b = Network::builder();
    b.node("s");
    for &(u, v, k) in edges {
        b.named_edge(&format!("{u}-{v}"), u, v, k).expect("fixture edge");
    }
    b.build("s", "t").expect("fixture terminals")
}

/// The FIG1 critical network: 15 nodes, 22 edges.
///
/// Thick edges are `a0-a1`, `c0-c1`, `a2-a3`, `c2-c3`, `d4-t` and `b4-t`.
/// The XOR subflow splits at `b0` and merges at `b3`.
pub fn fig1() -> Network {
    build(&[
        ("s", "a0", 1),
        ("s", "b0", 1),
        ("s", "c0", 1),
        ("b0", "c0", 1),
        ("b0", "a0", 1),
        ("a0", "a1", 2),
        ("c0", "c1", 2),
        ("a1", "a2", 1),
        ("a1", "c2", 1),
        ("c1", "c2", 1),
        ("c1", "a2", 1),
        ("a2", "a3", 2),
        ("c2", "c3", 2),
        ("a3", "b3", 1),
        ("c3", "b3", 1),
        ("a3", "a4", 1),
        ("b3", "b4", 1),
        ("a4", "b4", 1),
        ("a4", "d4", 1),
        ("c3", "d4", 1),
        ("d4", "t", 2),
        ("b4", "t", 2),
    ])
}

/// Two thick two-hop branches `s-a-t` and `s-b-t`.
pub fn diamond2() -> Network {
    build(&[("s", "a", 2), ("s", "b", 2), ("a", "t", 2), ("b", "t", 2)])
}

/// Three internally disjoint thin two-hop paths.
pub fn tripath() -> Network {
    build(&[
        ("s", "a", 1),
        ("s", "b", 1),
        ("s", "c", 1),
        ("a", "t", 1),
        ("b", "t", 1),
        ("c", "t", 1),
    ])
}

/// [`tripath`] with a fourth disjoint path through `d`.
pub fn tripath_plus() -> Network {
    build(&[
        ("s", "a", 1),
        ("s", "b", 1),
        ("s", "c", 1),
        ("s", "d", 1),
        ("a", "t", 1),
        ("b", "t", 1),
        ("c", "t", 1),
        ("d", "t", 1),
    ])
}

/// Three thin paths that meet in a middle 3-arc-cut: `s-{a,b,c}-{d,e,f}-t`
/// with a crossover between the halves.
pub fn two_stage() -> Network {
    build(&[
        ("s", "a", 1),
        ("s", "b", 1),
        ("s", "c", 1),
        ("a", "e", 1),
        ("b", "f", 1),
        ("c", "d", 1),
        ("d", "t", 1),
        ("e", "t", 1),
        ("f", "t", 1),
    ])
}

/// Four thin edges leave `s`; two of them carry half their capacity on a
/// max flow, so the residual closure of `s` is more than `s` itself.
pub fn slack_source() -> Network {
    build(&[
        ("s", "a", 1),
        ("s", "b", 1),
        ("s", "c", 1),
        ("s", "d", 1),
        ("c", "a", 1),
        ("d", "b", 1),
        ("a", "t", 2),
        ("b", "t", 2),
    ])
}

/// The single path `s-a-t` with thin edges.
pub fn unit_chain() -> Network {
    build(&[("s", "a", 1), ("a", "t", 1)])
}

/// The single path `s-a-t` with thick edges.
pub fn double_chain() -> Network {
    build(&[("s", "a", 2), ("a", "t", 2)])
}
