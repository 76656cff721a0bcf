//! Fragment width and depth.
//!
//! Width counts the wire segments a fragment owns: a wire cut splits a qubit
//! line and the downstream piece is a freshly prepared qubit. Since segments
//! on a path are its nodes minus its internal wire edges, width is
//! `|nodes| - |internal wire edges|`.
//!
//! Depth is the ASAP layer count of the fragment's operations, where each
//! measurement or preparation introduced by a wire cut takes one layer and a
//! gate-cut half acts as a single-qubit operation.

use crate::graph::{CircuitGraph, NodeId};

pub fn fragment_width(g: &CircuitGraph, assignment: &[usize], nodes: &[NodeId]) -> usize {
    let internal = nodes
        .iter()
        .filter(|&&n| g.wire_next(n).is_some_and(|m| assignment[m] == assignment[n]))
        .count();
    nodes.len() - internal
}

/// `nodes` must be sorted ascending (program order). `scratch` must have one
/// slot per graph node; its contents on entry are ignored.
pub fn fragment_depth(g: &CircuitGraph, assignment: &[usize], nodes: &[NodeId], scratch: &mut [u32]) -> usize {
    let Some(&first) = nodes.first() else {
        return 0;
    };
    let frag = assignment[first];
    let level_in = |n: NodeId, scratch: &[u32]| -> u32 {
        match g.wire_prev(n) {
            Some(p) if assignment[p] == frag => scratch[p],
            Some(_) => 1,
            None => 0,
        }
    };
    let mut depth = 0u32;
    for &n in nodes {
        let node = g.node(n);
        let level = match node.partner {
            Some(p) if assignment[p] == frag => {
                if p < n {
                    continue;
                }
                let l = level_in(n, scratch).max(level_in(p, scratch)) + 1;
                scratch[p] = l;
                l
            }
            _ => level_in(n, scratch) + 1,
        };
        scratch[n] = level;
        for m in std::iter::once(n).chain(node.partner.filter(|&p| assignment[p] == frag)) {
            let end = if g.wire_next(m).is_some_and(|x| assignment[x] != frag) {
                scratch[m] + 1
            } else {
                scratch[m]
            };
            depth = depth.max(end);
        }
    }
    depth as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_ghz, Circuit, Gate, GateKind};
    use crate::graph::build_circuit_graph;

    #[test]
    fn whole_circuit_depth() {
        let g = build_circuit_graph(&gen_ghz(4).unwrap());
        let a = vec![0; g.len()];
        let nodes: Vec<_> = (0..g.len()).collect();
        let mut s = vec![0; g.len()];
        assert_eq!(fragment_depth(&g, &a, &nodes, &mut s), 4);
        assert_eq!(fragment_width(&g, &a, &nodes), 4);
    }

    #[test]
    fn gate_cut_halves_are_local_ops() {
        // ghz4 split between q1 and q2: cx(1,2) becomes a gate cut.
        let g = build_circuit_graph(&gen_ghz(4).unwrap());
        let a: Vec<usize> = g.nodes().iter().map(|n| usize::from(n.qubit >= 2)).collect();
        let mut s = vec![0; g.len()];
        let left: Vec<_> = (0..g.len()).filter(|&n| a[n] == 0).collect();
        let right: Vec<_> = (0..g.len()).filter(|&n| a[n] == 1).collect();
        assert_eq!(fragment_width(&g, &a, &left), 2);
        assert_eq!(fragment_depth(&g, &a, &left, &mut s), 3);
        assert_eq!(fragment_depth(&g, &a, &right, &mut s), 2);
    }

    #[test]
    fn wire_cut_adds_segment_and_layers() {
        // q0: h, x, h with the middle x in its own fragment.
        let c = Circuit::from_gates(
            1,
            vec![
                Gate::one(GateKind::H, 0),
                Gate::one(GateKind::X, 0),
                Gate::one(GateKind::H, 0),
            ],
        )
        .unwrap();
        let g = build_circuit_graph(&c);
        let a = vec![0, 1, 0];
        let mut s = vec![0; 3];
        assert_eq!(fragment_width(&g, &a, &[0, 2]), 2);
        // h then measure on one segment; prepare then h on the other.
        assert_eq!(fragment_depth(&g, &a, &[0, 2], &mut s), 2);
        // prepare, x, measure.
        assert_eq!(fragment_depth(&g, &a, &[1], &mut s), 3);
    }
}
