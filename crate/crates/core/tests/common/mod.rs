#![allow(dead_code)]

use circuit_fold::{Circuit, Gate, GateKind};
use proptest::prelude::*;

/// Random gate over `n` qubits drawn from `kinds`.
pub fn gate(n: usize, kinds: Vec<GateKind>) -> impl Strategy<Value = Gate> {
    (prop::sample::select(kinds), 0..n, 1..n.max(2), -3.2f64..3.2).prop_map(move |(kind, a, off, theta)| {
        let kind = if n == 1 && kind.arity() == 2 { GateKind::H } else { kind };
        let params = if kind.num_params() == 1 { vec![theta] } else { vec![] };
        let qubits = if kind.arity() == 2 {
            vec![a, (a + off) % n]
        } else {
            vec![a]
        };
        Gate::new(kind, params, qubits).unwrap()
    })
}

pub fn circuit_with(
    qubits: std::ops::RangeInclusive<usize>,
    gates: std::ops::RangeInclusive<usize>,
    kinds: Vec<GateKind>,
) -> impl Strategy<Value = Circuit> {
    qubits.prop_flat_map(move |n| {
        prop::collection::vec(gate(n, kinds.clone()), gates.clone())
            .prop_map(move |gs| Circuit::from_gates(n, gs).unwrap())
    })
}

pub fn circuit(
    qubits: std::ops::RangeInclusive<usize>,
    gates: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Circuit> {
    circuit_with(qubits, gates, GateKind::ALL.to_vec())
}

/// Gates with a gate-cut decomposition, plus all single-qubit gates.
pub fn cuttable_kinds() -> Vec<GateKind> {
    GateKind::ALL.iter().copied().filter(|&k| k != GateKind::Swap).collect()
}
