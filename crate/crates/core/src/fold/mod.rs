//! Pattern folding of qubit-level gate sequences into a meta-graph.
//!
//! Each qubit starts as its own group. Every layer pairs groups by
//! entanglement, finds the longest common run of gate labels of each pair and
//! folds the matched nodes of one side into the other's meta nodes. The pair
//! then continues as one group whose sequence is the first side followed by
//! the unmatched remainder of the second. Layers repeat until one group is
//! left; a last pass folds repeated runs inside that final sequence.

mod lccs;
mod mep;

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{GateKind, ANGLE_TOLERANCE};
use crate::graph::{CircuitGraph, DotGraph, EdgeKind, NodeId, QubitGraph, Role};

pub use lccs::{lccs, longest_repeat, LccsMatch};
pub use mep::most_entangled_pairs;

pub const DEFAULT_MIN_LEN: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoldError {
    #[error("minimum fold length must be at least 1")]
    ZeroMinLen,
    #[error("qubit graphs do not match the circuit graph")]
    GraphMismatch,
}

/// Matching key of a node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeLabel {
    pub kind: GateKind,
    /// Angles in units of the angle tolerance.
    pub params: Vec<i64>,
    pub role: Role,
    pub partner_kind: Option<GateKind>,
}

impl NodeLabel {
    pub fn of(g: &CircuitGraph, n: NodeId) -> NodeLabel {
        let node = g.node(n);
        NodeLabel {
            kind: node.kind,
            params: node
                .params
                .iter()
                .map(|p| (p / ANGLE_TOLERANCE).round() as i64)
                .collect(),
            role: node.role,
            partner_kind: node.partner.map(|p| g.node(p).kind),
        }
    }
}

/// Labels of every node of `g`, indexed by node id.
pub fn node_labels(g: &CircuitGraph) -> Vec<NodeLabel> {
    (0..g.len()).map(|n| NodeLabel::of(g, n)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaNode {
    pub id: usize,
    pub representative: NodeId,
    /// Ascending.
    pub folded_nodes: Vec<NodeId>,
    pub fold_weight: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaEdge {
    pub src: usize,
    pub dst: usize,
    pub kind: EdgeKind,
    pub weight: f64,
    /// Original edges mapped onto this one.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaGraph {
    pub meta_nodes: Vec<MetaNode>,
    pub meta_edges: Vec<MetaEdge>,
    provenance: Vec<usize>,
}

impl MetaGraph {
    /// Meta node holding an original node.
    pub fn meta_of(&self, n: NodeId) -> usize {
        self.provenance[n]
    }

    pub fn provenance(&self) -> &[usize] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.meta_nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.meta_nodes.is_empty()
    }

    /// `|meta nodes| / |original nodes|`.
    pub fn compression_ratio(&self) -> f64 {
        if self.provenance.is_empty() {
            1.0
        } else {
            self.meta_nodes.len() as f64 / self.provenance.len() as f64
        }
    }

    fn from_classes(g: &CircuitGraph, class_of: &[usize]) -> MetaGraph {
        let mut members: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
        for (n, &c) in class_of.iter().enumerate() {
            members.entry(c).or_default().push(n);
        }
        let mut by_rep: Vec<Vec<NodeId>> = members.into_values().collect();
        by_rep.sort_by_key(|m| m[0]);
        let mut provenance = vec![0; class_of.len()];
        let meta_nodes: Vec<MetaNode> = by_rep
            .into_iter()
            .enumerate()
            .map(|(id, folded_nodes)| {
                for &n in &folded_nodes {
                    provenance[n] = id;
                }
                MetaNode {
                    id,
                    representative: folded_nodes[0],
                    fold_weight: folded_nodes.len(),
                    folded_nodes,
                }
            })
            .collect();
        let mut edges: BTreeMap<(usize, usize, EdgeKind), (f64, usize)> = BTreeMap::new();
        for e in g.edges() {
            let (mut s, mut d) = (provenance[e.src], provenance[e.dst]);
            if e.kind == EdgeKind::Gate && d < s {
                std::mem::swap(&mut s, &mut d);
            }
            edges.entry((s, d, e.kind)).or_insert((e.weight, 0)).1 += 1;
        }
        let meta_edges = edges
            .into_iter()
            .map(|((src, dst, kind), (weight, multiplicity))| MetaEdge {
                src,
                dst,
                kind,
                weight,
                multiplicity,
            })
            .collect();
        MetaGraph {
            meta_nodes,
            meta_edges,
            provenance,
        }
    }
}

impl DotGraph for (&MetaGraph, &CircuitGraph) {
    fn dot_nodes(&self) -> Vec<(usize, String, usize)> {
        let (m, g) = *self;
        m.meta_nodes
            .iter()
            .map(|mn| {
                let n = g.node(mn.representative);
                (mn.id, format!("{}{}", n.gate_name(), n.role.tag()), mn.fold_weight)
            })
            .collect()
    }

    fn dot_edges(&self) -> Vec<(usize, usize, EdgeKind, f64)> {
        self.0
            .meta_edges
            .iter()
            .map(|e| (e.src, e.dst, e.kind, e.weight))
            .collect()
    }
}

/// Union-find over nodes; the root of a class is its smallest node.
struct Classes {
    parent: Vec<usize>,
}

impl Classes {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn fold(&mut self, into: usize, from: usize) {
        let (a, b) = (self.find(into), self.find(from));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
    }
}

struct Group {
    qubits: Vec<usize>,
    /// Class roots (original node ids) in sequence order.
    seq: Vec<usize>,
}

/// Folds qubit-level sequences of `g` into a meta-graph.
pub fn fold(graphs: &[QubitGraph], g: &CircuitGraph, min_len: usize) -> Result<MetaGraph, FoldError> {
    if min_len == 0 {
        return Err(FoldError::ZeroMinLen);
    }
    let total: usize = graphs.iter().map(|q| q.sequence.len()).sum();
    if total != g.len() || graphs.iter().flat_map(|q| &q.sequence).any(|&n| n >= g.len()) {
        return Err(FoldError::GraphMismatch);
    }
    let labels = node_labels(g);
    let mut classes = Classes {
        parent: (0..g.len()).collect(),
    };
    let mut groups: Vec<Group> = graphs
        .iter()
        .map(|q| Group {
            qubits: vec![q.qubit],
            seq: q.sequence.clone(),
        })
        .collect();

    while groups.len() > 1 {
        let qubit_sets: Vec<Vec<usize>> = groups.iter().map(|gr| gr.qubits.clone()).collect();
        let pairs = most_entangled_pairs(&qubit_sets, g);
        let plans: Vec<Option<LccsMatch>> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let la: Vec<&NodeLabel> = groups[a].seq.iter().map(|&c| &labels[c]).collect();
                let lb: Vec<&NodeLabel> = groups[b].seq.iter().map(|&c| &labels[c]).collect();
                lccs(&la, &lb, min_len)
            })
            .collect();

        let mut paired = vec![false; groups.len()];
        let mut next = Vec::with_capacity(groups.len() / 2 + 1);
        let mut taken: Vec<Option<Group>> = groups.into_iter().map(Some).collect();
        for (&(a, b), plan) in pairs.iter().zip(plans) {
            paired[a] = true;
            paired[b] = true;
            let mut ga = taken[a].take().expect("pair members are distinct");
            let gb = taken[b].take().expect("pair members are distinct");
            let mut rest = gb.seq;
            if let Some(m) = plan {
                for k in 0..m.len {
                    classes.fold(ga.seq[m.start1 + k], rest[m.start2 + k]);
                }
                rest.drain(m.range2());
                for c in ga.seq.iter_mut() {
                    *c = classes.find(*c);
                }
            }
            ga.seq.extend(rest.into_iter().map(|c| classes.find(c)));
            ga.qubits.extend(gb.qubits);
            ga.qubits.sort_unstable();
            next.push(ga);
        }
        next.extend(taken.into_iter().flatten());
        next.sort_by_key(|gr| gr.qubits[0]);
        groups = next;
    }

    if let Some(last) = groups.pop() {
        let mut seq = last.seq;
        loop {
            let ls: Vec<&NodeLabel> = seq.iter().map(|&c| &labels[c]).collect();
            let Some(m) = longest_repeat(&ls, min_len) else {
                break;
            };
            for k in 0..m.len {
                classes.fold(seq[m.start1 + k], seq[m.start2 + k]);
            }
            seq.drain(m.range2());
            for c in seq.iter_mut() {
                *c = classes.find(*c);
            }
        }
    }

    let class_of: Vec<usize> = (0..g.len()).map(|n| classes.find(n)).collect();
    Ok(MetaGraph::from_classes(g, &class_of))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_bv, gen_ghz, gen_qft, Circuit, Gate};
    use crate::graph::{build_circuit_graph, extract_qubit_graphs};

    fn fold_circuit(c: &Circuit, min_len: usize) -> (CircuitGraph, MetaGraph) {
        let g = build_circuit_graph(c);
        let m = fold(&extract_qubit_graphs(&g), &g, min_len).unwrap();
        (g, m)
    }

    fn check_labels(g: &CircuitGraph, m: &MetaGraph) {
        let labels = node_labels(g);
        for mn in &m.meta_nodes {
            assert!(mn.folded_nodes.iter().all(|&n| labels[n] == labels[mn.representative]));
        }
        let sum: usize = m.meta_nodes.iter().map(|mn| mn.fold_weight).sum();
        assert_eq!(sum, g.len());
    }

    #[test]
    fn bv_all_ones_folds_data_pattern() {
        let n = 6;
        let (g, m) = fold_circuit(&gen_bv(&"1".repeat(n)).unwrap(), 3);
        check_labels(&g, &m);
        // every data qubit's [h, cx control, h] lands in three meta nodes
        for pos in 0..3 {
            let metas: std::collections::BTreeSet<usize> = (0..n).map(|q| m.meta_of(g.qubit_path(q)[pos])).collect();
            assert_eq!(metas.len(), 1);
            assert_eq!(m.meta_nodes[*metas.iter().next().unwrap()].fold_weight, n);
        }
    }

    #[test]
    fn no_repeats_keeps_graph() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::one(GateKind::H, 0),
                Gate::one(GateKind::X, 0),
                Gate::one(GateKind::S, 1),
                Gate::one(GateKind::T, 1),
            ],
        )
        .unwrap();
        let (g, m) = fold_circuit(&c, 3);
        assert_eq!(m.len(), g.len());
        assert!(m.meta_nodes.iter().all(|mn| mn.fold_weight == 1));
        assert_eq!(m.meta_edges.len(), g.edges().len());
    }

    #[test]
    fn qft_compresses() {
        let (g, m) = fold_circuit(&gen_qft(8).unwrap(), 3);
        check_labels(&g, &m);
        assert!(m.len() < g.len());
    }

    #[test]
    fn rejects_zero_min_len() {
        let g = build_circuit_graph(&gen_ghz(3).unwrap());
        assert_eq!(fold(&extract_qubit_graphs(&g), &g, 0), Err(FoldError::ZeroMinLen));
    }

    #[test]
    fn dot_shows_fold_weight() {
        let (g, m) = fold_circuit(&gen_bv("1111").unwrap(), 3);
        let dot = crate::graph::export_dot(&(&m, &g));
        assert!(dot.contains("×4"));
    }
}
