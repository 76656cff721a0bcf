//! Quantum circuit cutting guided by folded per-qubit gate patterns.
//!
//! A circuit becomes a role-split graph, repeated gate runs on each qubit
//! fold into a weighted meta-graph, and the meta-graph seeds a partitioner
//! that minimizes the quantum resource overhead (QRO) of the cut. A small
//! statevector simulator with quasiprobability knitting checks that a cut
//! reproduces the expectation values of the uncut circuit.
//!
//! ```
//! use circuit_fold::{gen_ghz, partition_circuit, PartitionConfig};
//!
//! let c = gen_ghz(8).unwrap();
//! let p = partition_circuit(&c, 4, &PartitionConfig::default()).unwrap();
//! assert_eq!(p.fragments.len(), 2);
//! assert_eq!(p.cuts.len(), 1);
//! ```

pub mod circuit;
pub mod cost;
pub mod fold;
pub mod graph;
pub mod knit;
pub mod partition;
pub mod scalar;

pub use circuit::{
    gen_adder, gen_bv, gen_ghz, gen_qft, gen_qft_with_swaps, parse_qasm, write_qasm, AdderLayout, Circuit,
    CircuitError, Gate, GateKind, GeneratorError, Observable, Pauli, QasmError,
};
pub use cost::{gamma_lookup, group_parallel_cuts, sampling_overhead, CutClass, CutGroup, CutKind, GammaMode};
pub use fold::{fold, lccs, most_entangled_pairs, MetaNode, NodeLabel, DEFAULT_MIN_LEN};
pub use graph::{
    build_circuit_graph, export_dot, extract_qubit_graphs, CircuitGraph, EdgeKind, GraphEdge, GraphNode, QubitGraph,
};
pub use knit::{
    gate_cut_decomposition, reconstruct_expectation, simulate, wire_cut_decomposition, KnitError, ReconstructionMode,
};
pub use partition::{
    naive_baseline, partition_circuit, partition_circuit_detailed, refine, Cut, Fragment, Partition, PartitionConfig,
    PartitionError,
};
pub use scalar::{CompensatedSum, Real};

pub use fold::MetaGraph;

/// Double-precision instances of the scalar-generic types.
pub type GammaTable = cost::GammaTable<f64>;
pub type CostReport = cost::CostReport<f64>;
pub type FragmentCost = cost::FragmentCost<f64>;
pub type ErrorBudget = cost::ErrorBudget<f64>;
pub type StateVector = knit::StateVector<f64>;
pub type QpdDecomposition = knit::QpdDecomposition<f64>;
pub type QpdTerm = knit::QpdTerm<f64>;
pub type Reconstruction = knit::Reconstruction<f64>;

/// `⟨o⟩` of the uncut circuit in double precision.
pub fn oracle_expectation(c: &Circuit, o: &Observable) -> Result<f64, KnitError> {
    knit::expectation(&knit::simulate::<f64>(c)?, o)
}

/// QRO of `p` in `mode` with the default weight convention.
pub fn qro(p: &Partition, g: &CircuitGraph, mode: GammaMode) -> CostReport {
    cost::qro(p, g, &GammaTable::new(mode))
}
