use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};

use crate::fold::NodeLabel;
use crate::graph::{CircuitGraph, EdgeKind, NodeId};

pub const WL_ITERATIONS: usize = 3;

#[derive(Hash, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeColor {
    WireOut,
    WireIn,
    Gate,
}

fn hash_of<T: Hash>(x: &T) -> u64 {
    let mut h = DefaultHasher::new();
    x.hash(&mut h);
    h.finish()
}

/// Initial color of every node of `g`.
pub(crate) fn label_colors(g: &CircuitGraph) -> Vec<u64> {
    (0..g.len()).map(|n| hash_of(&NodeLabel::of(g, n))).collect()
}

/// Weisfeiler-Lehman hash of the subgraph induced by `nodes`.
pub fn wl_hash(g: &CircuitGraph, nodes: &[NodeId], iterations: usize) -> u64 {
    let colors: HashMap<NodeId, u64> = nodes.iter().map(|&n| (n, hash_of(&NodeLabel::of(g, n)))).collect();
    wl_hash_with(g, nodes, |n| colors[&n], iterations)
}

/// Same as [`wl_hash`] with caller-supplied initial colors.
pub(crate) fn wl_hash_with(g: &CircuitGraph, nodes: &[NodeId], init: impl Fn(NodeId) -> u64, iterations: usize) -> u64 {
    let mut sorted: Vec<NodeId> = nodes.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let local = |n: NodeId| sorted.binary_search(&n).ok();
    let adj: Vec<Vec<(EdgeColor, usize)>> = sorted
        .iter()
        .map(|&n| {
            g.incident_edges(n)
                .filter_map(|e| {
                    let m = e.other(n);
                    let color = match e.kind {
                        EdgeKind::Gate => EdgeColor::Gate,
                        EdgeKind::Wire if e.src == n => EdgeColor::WireOut,
                        EdgeKind::Wire => EdgeColor::WireIn,
                    };
                    local(m).map(|k| (color, k))
                })
                .collect()
        })
        .collect();
    let mut colors: Vec<u64> = sorted.iter().map(|&n| init(n)).collect();
    let mut scratch = Vec::new();
    for _ in 0..iterations {
        let next: Vec<u64> = adj
            .iter()
            .enumerate()
            .map(|(i, nbrs)| {
                scratch.clear();
                scratch.extend(nbrs.iter().map(|&(c, k)| (c, colors[k])));
                scratch.sort_unstable();
                hash_of(&(colors[i], &scratch))
            })
            .collect();
        colors = next;
    }
    colors.sort_unstable();
    hash_of(&colors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate, GateKind};
    use crate::graph::build_circuit_graph;

    fn chain(kind: GateKind, qs: [usize; 3]) -> (CircuitGraph, Vec<NodeId>) {
        let c = Circuit::from_gates(8, vec![Gate::two(kind, qs[0], qs[1]), Gate::two(kind, qs[1], qs[2])]).unwrap();
        let g = build_circuit_graph(&c);
        let nodes = (0..g.len()).collect();
        (g, nodes)
    }

    #[test]
    fn relabeled_chains_hash_equal() {
        let (g1, n1) = chain(GateKind::Cx, [0, 1, 2]);
        let (g2, n2) = chain(GateKind::Cx, [5, 6, 7]);
        assert_eq!(wl_hash(&g1, &n1, 3), wl_hash(&g2, &n2, 3));
    }

    #[test]
    fn gate_kind_changes_hash() {
        let (g1, n1) = chain(GateKind::Cx, [0, 1, 2]);
        let (g2, n2) = chain(GateKind::Cz, [0, 1, 2]);
        assert_ne!(wl_hash(&g1, &n1, 3), wl_hash(&g2, &n2, 3));
    }

    #[test]
    fn deterministic() {
        let (g, n) = chain(GateKind::Cx, [2, 4, 3]);
        assert_eq!(wl_hash(&g, &n, 3), wl_hash(&g, &n, 3));
        let rev: Vec<NodeId> = n.iter().rev().copied().collect();
        assert_eq!(wl_hash(&g, &n, 3), wl_hash(&g, &rev, 3));
    }

    #[test]
    fn wire_direction_matters() {
        // h then x versus x then h on one qubit
        let a = Circuit::from_gates(1, vec![Gate::one(GateKind::H, 0), Gate::one(GateKind::X, 0)]).unwrap();
        let b = Circuit::from_gates(1, vec![Gate::one(GateKind::X, 0), Gate::one(GateKind::H, 0)]).unwrap();
        let (ga, gb) = (build_circuit_graph(&a), build_circuit_graph(&b));
        assert_ne!(wl_hash(&ga, &[0, 1], 3), wl_hash(&gb, &[0, 1], 3));
    }
}
