//! Circuit graph: one node per gate operand, typed and γ-weighted edges
//! that are the candidate cut points.
//!
//! Single-qubit gates contribute one node. Two-qubit gates contribute two
//! role nodes, one per operand qubit, joined by an undirected gate edge.
//! Consecutive nodes on a qubit are joined by a directed wire edge. Cutting a
//! gate edge is a gate cut, cutting a wire edge is a wire cut.

mod dot;

use rayon::prelude::*;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::cost::{gamma_lookup, CutKind, GammaMode};

pub use dot::{export_dot, DotGraph};

pub type NodeId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Single,
    Control,
    Target,
    /// Operand of a gate with interchangeable operands (cz, cp, swap).
    Symmetric,
}

impl Role {
    pub fn tag(self) -> &'static str {
        match self {
            Role::Single => "",
            Role::Control => "c",
            Role::Target => "t",
            Role::Symmetric => "s",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphNode {
    pub id: NodeId,
    /// Index into `Circuit::gates`.
    pub gate_ref: usize,
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub qubit: usize,
    pub role: Role,
    /// The other half of a two-qubit gate.
    pub partner: Option<NodeId>,
}

impl GraphNode {
    pub fn gate_name(&self) -> &'static str {
        self.kind.name()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Wire,
    Gate,
}

impl EdgeKind {
    pub fn cut_kind(self) -> CutKind {
        match self {
            EdgeKind::Wire => CutKind::Wire,
            EdgeKind::Gate => CutKind::Gate,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Wire => "wire",
            EdgeKind::Gate => "gate",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphEdge {
    pub id: EdgeId,
    /// Wire edges point forward in time; gate edges run control to target
    /// (first to second operand) but are undirected.
    pub src: NodeId,
    pub dst: NodeId,
    pub kind: EdgeKind,
    pub weight: f64,
}

impl GraphEdge {
    pub fn other(&self, n: NodeId) -> NodeId {
        if self.src == n {
            self.dst
        } else {
            self.src
        }
    }
}

#[derive(Debug, Clone)]
pub struct CircuitGraph {
    num_qubits: usize,
    num_gates: usize,
    nodes: Vec<GraphNode>,
    edges: Vec<GraphEdge>,
    qubit_heads: Vec<Option<NodeId>>,
    wire_prev: Vec<Option<NodeId>>,
    wire_next: Vec<Option<NodeId>>,
    incident: Vec<Vec<EdgeId>>,
    gate_nodes: Vec<(NodeId, Option<NodeId>)>,
}

/// Builds the circuit graph. Node ids follow program order.
pub fn build_circuit_graph(c: &Circuit) -> CircuitGraph {
    let n = c.num_qubits();
    let mut nodes = Vec::new();
    let mut edges: Vec<GraphEdge> = Vec::new();
    let mut qubit_heads = vec![None; n];
    let mut last: Vec<Option<NodeId>> = vec![None; n];
    let mut wire_prev = Vec::new();
    let mut wire_next = Vec::new();
    let mut gate_nodes = Vec::with_capacity(c.len());

    let wire_weight = gamma_lookup(CutKind::Wire, None, GammaMode::Practical).expect("wire weight defined");

    for (gi, gate) in c.gates().iter().enumerate() {
        let roles: &[Role] = match (gate.qubits.len(), gate.kind.is_symmetric()) {
            (1, _) => &[Role::Single],
            (_, true) => &[Role::Symmetric, Role::Symmetric],
            (_, false) => &[Role::Control, Role::Target],
        };
        let first = nodes.len();
        for (k, (&q, &role)) in gate.qubits.iter().zip(roles).enumerate() {
            let id = first + k;
            let partner = if gate.qubits.len() == 2 {
                Some(first + 1 - k)
            } else {
                None
            };
            nodes.push(GraphNode {
                id,
                gate_ref: gi,
                kind: gate.kind,
                params: gate.params.clone(),
                qubit: q,
                role,
                partner,
            });
            wire_prev.push(last[q]);
            wire_next.push(None);
            match last[q] {
                Some(prev) => {
                    wire_next[prev] = Some(id);
                    edges.push(GraphEdge {
                        id: edges.len(),
                        src: prev,
                        dst: id,
                        kind: EdgeKind::Wire,
                        weight: wire_weight,
                    });
                }
                None => qubit_heads[q] = Some(id),
            }
            last[q] = Some(id);
        }
        if gate.qubits.len() == 2 {
            let weight = gamma_lookup(CutKind::Gate, Some(gate.kind), GammaMode::Practical)
                .expect("every two-qubit gate has a gate-cut weight");
            edges.push(GraphEdge {
                id: edges.len(),
                src: first,
                dst: first + 1,
                kind: EdgeKind::Gate,
                weight,
            });
            gate_nodes.push((first, Some(first + 1)));
        } else {
            gate_nodes.push((first, None));
        }
    }

    let mut incident = vec![Vec::new(); nodes.len()];
    for e in &edges {
        incident[e.src].push(e.id);
        incident[e.dst].push(e.id);
    }

    CircuitGraph {
        num_qubits: n,
        num_gates: c.len(),
        nodes,
        edges,
        qubit_heads,
        wire_prev,
        wire_next,
        incident,
        gate_nodes,
    }
}

impl CircuitGraph {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_gates(&self) -> usize {
        self.num_gates
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &GraphNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &GraphEdge {
        &self.edges[id]
    }

    pub fn qubit_heads(&self) -> &[Option<NodeId>] {
        &self.qubit_heads
    }

    pub fn wire_prev(&self, id: NodeId) -> Option<NodeId> {
        self.wire_prev[id]
    }

    pub fn wire_next(&self, id: NodeId) -> Option<NodeId> {
        self.wire_next[id]
    }

    pub fn incident_edges(&self, id: NodeId) -> impl Iterator<Item = &GraphEdge> + '_ {
        self.incident[id].iter().map(move |&e| &self.edges[e])
    }

    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.incident_edges(id).map(move |e| e.other(id))
    }

    /// Nodes of a gate: the first operand and, for two-qubit gates, the second.
    pub fn gate_nodes(&self, gate_ref: usize) -> (NodeId, Option<NodeId>) {
        self.gate_nodes[gate_ref]
    }

    /// Wire path of a qubit in program order.
    pub fn qubit_path(&self, q: usize) -> Vec<NodeId> {
        let mut out = Vec::new();
        let mut cur = self.qubit_heads[q];
        while let Some(id) = cur {
            out.push(id);
            cur = self.wire_next[id];
        }
        out
    }

    /// Rebuilds the circuit from the nodes, deduplicated by gate.
    pub fn to_circuit(&self) -> Circuit {
        let mut c = Circuit::new(self.num_qubits).expect("graph has qubits");
        for &(first, second) in &self.gate_nodes {
            let a = &self.nodes[first];
            let mut qubits = vec![a.qubit];
            if let Some(b) = second {
                qubits.push(self.nodes[b].qubit);
            }
            c.push(Gate::new(a.kind, a.params.clone(), qubits).expect("graph nodes form valid gates"))
                .expect("in range");
        }
        c
    }
}

/// The sequence of dependent gate nodes on one qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QubitGraph {
    pub qubit: usize,
    pub sequence: Vec<NodeId>,
}

/// One qubit graph per qubit, ordered by qubit index.
pub fn extract_qubit_graphs(g: &CircuitGraph) -> Vec<QubitGraph> {
    (0..g.num_qubits())
        .into_par_iter()
        .map(|q| QubitGraph {
            qubit: q,
            sequence: g.qubit_path(q),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_bv, gen_ghz};

    #[test]
    fn ghz3_structure() {
        let g = build_circuit_graph(&gen_ghz(3).unwrap());
        assert_eq!(g.len(), 5);
        let wires = g.edges().iter().filter(|e| e.kind == EdgeKind::Wire).count();
        let gates = g.edges().iter().filter(|e| e.kind == EdgeKind::Gate).count();
        assert_eq!((wires, gates), (2, 2));
        let roles: Vec<(GateKind, Role, usize)> = g.nodes().iter().map(|n| (n.kind, n.role, n.qubit)).collect();
        assert_eq!(
            roles,
            vec![
                (GateKind::H, Role::Single, 0),
                (GateKind::Cx, Role::Control, 0),
                (GateKind::Cx, Role::Target, 1),
                (GateKind::Cx, Role::Control, 1),
                (GateKind::Cx, Role::Target, 2),
            ]
        );
        assert!(g
            .edges()
            .iter()
            .all(|e| e.weight == if e.kind == EdgeKind::Wire { 16.0 } else { 9.0 }));
    }

    #[test]
    fn single_gate() {
        let c = Circuit::from_gates(1, vec![Gate::one(GateKind::H, 0)]).unwrap();
        let g = build_circuit_graph(&c);
        assert_eq!((g.len(), g.edges().len()), (1, 0));
    }

    #[test]
    fn bv_node_count() {
        // h on each data qubit twice, x and h on the ancilla, one cx per 1-bit
        let g = build_circuit_graph(&gen_bv("11").unwrap());
        assert_eq!(g.len(), (2 * 2 + 2) + 2 * 2);
        let g = build_circuit_graph(&gen_bv("1011").unwrap());
        assert_eq!(g.len(), (2 * 4 + 2) + 2 * 3);
    }

    #[test]
    fn ghz3_qubit_graphs() {
        let g = build_circuit_graph(&gen_ghz(3).unwrap());
        let qgs = extract_qubit_graphs(&g);
        let seqs: Vec<Vec<NodeId>> = qgs.iter().map(|q| q.sequence.clone()).collect();
        assert_eq!(seqs, vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn idle_qubit_has_empty_sequence() {
        let c = Circuit::from_gates(3, vec![Gate::one(GateKind::H, 0)]).unwrap();
        let g = build_circuit_graph(&c);
        let qgs = extract_qubit_graphs(&g);
        assert!(qgs[1].sequence.is_empty() && qgs[2].sequence.is_empty());
        assert_eq!(qgs.iter().map(|q| q.sequence.len()).sum::<usize>(), g.len());
    }

    #[test]
    fn round_trips_to_circuit() {
        let c = gen_bv("1011").unwrap();
        assert_eq!(build_circuit_graph(&c).to_circuit(), c);
    }
}
