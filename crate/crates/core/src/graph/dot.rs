use std::fmt::Write as _;

use super::{CircuitGraph, EdgeKind};

/// Graph that can be rendered as a DOT digraph.
pub trait DotGraph {
    /// `(id, label, fold weight)` per node.
    fn dot_nodes(&self) -> Vec<(usize, String, usize)>;
    /// `(src, dst, kind, weight)` per edge; gate edges are drawn undirected.
    fn dot_edges(&self) -> Vec<(usize, usize, EdgeKind, f64)>;
}

impl DotGraph for CircuitGraph {
    fn dot_nodes(&self) -> Vec<(usize, String, usize)> {
        self.nodes()
            .iter()
            .map(|n| (n.id, format!("{}{} q{}", n.gate_name(), n.role.tag(), n.qubit), 1))
            .collect()
    }

    fn dot_edges(&self) -> Vec<(usize, usize, EdgeKind, f64)> {
        self.edges().iter().map(|e| (e.src, e.dst, e.kind, e.weight)).collect()
    }
}

pub fn export_dot(g: &impl DotGraph) -> String {
    let mut out = String::from("digraph circuit {\n  node [shape=box];\n");
    for (id, label, w) in g.dot_nodes() {
        let _ = writeln!(out, "  n{id} [label=\"{label} ×{w}\"];");
    }
    for (s, d, kind, w) in g.dot_edges() {
        let style = match kind {
            EdgeKind::Wire => "",
            EdgeKind::Gate => ", dir=none, style=dashed",
        };
        let _ = writeln!(out, "  n{s} -> n{d} [label=\"{} {w}\"{style}];", kind.name());
    }
    out.push_str("}\n");
    out
}
