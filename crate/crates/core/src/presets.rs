//! Networks from the examples: `N1` (Eulerian, eight unit edges), `N2`
//! (three parallel arcs between `u1` and `u3`) and the circle.

use crate::network::{Edge, EdgeId, Network, NetworkPoint};

pub const N2_U1: usize = 0;
pub const N2_U2: usize = 1;
pub const N2_U3: usize = 2;
pub const N2_U4: usize = 3;
/// Edge ids of `N2`: `u1u2`, `u2u3`, `u1u4`, `u4u3`, `u1u3`.
pub const N2_U1U2: EdgeId = 0;
pub const N2_U2U3: EdgeId = 1;
pub const N2_U1U4: EdgeId = 2;
pub const N2_U4U3: EdgeId = 3;
pub const N2_MIDDLE_EDGE: EdgeId = 4;

fn build(names: &[&str], edges: &[(usize, usize, f64)]) -> Network {
    Network::new(
        names.iter().map(|s| s.to_string()).collect(),
        edges.iter().map(|&(a, b, len)| Edge { a, b, len }).collect(),
    )
    .expect("preset network is valid")
}

/// Eulerian network with eight unit edges, `λ = 8`.
pub fn n1() -> Network {
    build(
        &["u1", "u2", "u3", "u4", "u5", "u6", "u7"],
        &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (4, 5, 1.0), (5, 2, 1.0), (2, 6, 1.0), (6, 0, 1.0)],
    )
}

/// Three arcs between `u1` and `u3`: two of them pass through `u2` and `u4`
/// with halves of length ½, the middle one has length 1. `λ = 3`.
pub fn n2() -> Network {
    build(&["u1", "u2", "u3", "u4"], &[(0, 1, 0.5), (1, 2, 0.5), (0, 3, 0.5), (3, 2, 0.5), (0, 2, 1.0)])
}

/// A single self-loop of length `len`.
pub fn circle(len: f64) -> Network {
    build(&["o"], &[(0, 0, len)])
}

/// Marked points `u5..u10` of `N2`, indexed from `u5`.
pub fn n2_marked(k: usize) -> NetworkPoint {
    match k {
        5 => NetworkPoint::new(N2_U4U3, 0.5),
        6 => NetworkPoint::new(N2_U1U4, 0.5),
        7 => NetworkPoint::new(N2_U1U2, 0.5),
        8 => NetworkPoint::new(N2_U2U3, 0.5),
        9 => NetworkPoint::new(N2_MIDDLE_EDGE, 0.25),
        10 => NetworkPoint::new(N2_MIDDLE_EDGE, 0.75),
        _ => panic!("N2 has marked points u5..u10 only"),
    }
}

/// Point `u_k` of `N2` for `k` in 1..=10.
pub fn n2_point(net: &Network, k: usize) -> NetworkPoint {
    if (1..=4).contains(&k) {
        net.node_point(k - 1).expect("N2 node")
    } else {
        n2_marked(k)
    }
}
