//! Meta-graph guided partitioning.
//!
//! Pipeline: circuit graph, qubit graphs, folding, lockstep module finding
//! with WL hashing, greedy supernode merging under the qubit constraint and
//! QRO-driven boundary refinement.

mod baseline;
mod merge;
pub(crate) mod metrics;
mod modules;
mod refine;
mod wl;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::circuit::{Circuit, GateKind};
use crate::cost::{CutKind, GammaMode};
use crate::fold::{fold, FoldError, MetaGraph, DEFAULT_MIN_LEN};
use crate::graph::{build_circuit_graph, extract_qubit_graphs, CircuitGraph, EdgeKind, GraphEdge, NodeId};

pub use baseline::naive_baseline;
pub use merge::{greedy_merge, Supernode};
pub use modules::{module_finding, InitialPartition, ModuleBucket};
pub use refine::{refine, MAX_REFINE_PASSES};
pub use wl::{wl_hash, WL_ITERATIONS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("qubit constraint must be at least 2, got {0}")]
    ConstraintTooSmall(usize),
    #[error(transparent)]
    Fold(#[from] FoldError),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub id: usize,
    /// Sorted ascending.
    pub node_ids: Vec<NodeId>,
    pub width: usize,
    pub depth: usize,
}

impl Fragment {
    /// Original qubits touched by this fragment, ascending.
    pub fn qubits(&self, g: &CircuitGraph) -> Vec<usize> {
        let mut qs: Vec<usize> = self.node_ids.iter().map(|&n| g.node(n).qubit).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    pub edge: GraphEdge,
    pub kind: CutKind,
    /// For wire cuts `(upstream, downstream)`; for gate cuts the fragments of
    /// the first and second operand.
    pub fragments: (usize, usize),
    pub gamma: f64,
    /// Gate owning the edge (the gate itself for gate cuts, the upstream
    /// node's gate for wire cuts).
    pub gate: GateKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub fragments: Vec<Fragment>,
    pub cuts: Vec<Cut>,
    assignment: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionViolation {
    #[error("assignment covers {got} nodes, graph has {expected}")]
    Coverage { expected: usize, got: usize },
    #[error("node {0} is not in exactly one fragment")]
    NodeCoverage(NodeId),
    #[error("fragment {id} has width {width} > {limit}")]
    Width { id: usize, width: usize, limit: usize },
    #[error("fragment {0} is empty")]
    EmptyFragment(usize),
    #[error("cut set does not match the crossing edges")]
    CutSet,
    #[error("fragment {0} metrics are stale")]
    StaleMetrics(usize),
    #[error("gate {gate_ref} is covered {count} times")]
    GateCoverage { gate_ref: usize, count: usize },
}

impl Partition {
    /// Builds a partition from a node-to-label map. Labels are renumbered in
    /// order of each fragment's smallest node id.
    pub fn from_assignment(g: &CircuitGraph, labels: &[usize]) -> Partition {
        assert_eq!(labels.len(), g.len(), "one label per node");
        let mut remap = std::collections::HashMap::new();
        let mut assignment = Vec::with_capacity(labels.len());
        for &l in labels {
            let next = remap.len();
            assignment.push(*remap.entry(l).or_insert(next));
        }
        let k = remap.len();
        let mut members = vec![Vec::new(); k];
        for (n, &f) in assignment.iter().enumerate() {
            members[f].push(n);
        }
        let mut scratch = vec![0u32; g.len()];
        let fragments = members
            .into_iter()
            .enumerate()
            .map(|(id, node_ids)| Fragment {
                id,
                width: metrics::fragment_width(g, &assignment, &node_ids),
                depth: metrics::fragment_depth(g, &assignment, &node_ids, &mut scratch),
                node_ids,
            })
            .collect();
        let cuts = crossing_cuts(g, &assignment);
        Partition {
            fragments,
            cuts,
            assignment,
        }
    }

    pub fn single(g: &CircuitGraph) -> Partition {
        Partition::from_assignment(g, &vec![0; g.len()])
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn fragment_of(&self, n: NodeId) -> usize {
        self.assignment[n]
    }

    pub fn max_width(&self) -> usize {
        self.fragments.iter().map(|f| f.width).max().unwrap_or(0)
    }

    pub fn num_cuts(&self, kind: CutKind) -> usize {
        self.cuts.iter().filter(|c| c.kind == kind).count()
    }

    /// Checks coverage, the cut set and the qubit constraint.
    pub fn validate(&self, g: &CircuitGraph, q_con: usize) -> Result<(), PartitionViolation> {
        if self.assignment.len() != g.len() {
            return Err(PartitionViolation::Coverage {
                expected: g.len(),
                got: self.assignment.len(),
            });
        }
        let mut seen = vec![0usize; g.len()];
        for f in &self.fragments {
            if f.node_ids.is_empty() {
                return Err(PartitionViolation::EmptyFragment(f.id));
            }
            for &n in &f.node_ids {
                if n >= g.len() || self.assignment[n] != f.id {
                    return Err(PartitionViolation::NodeCoverage(n.min(g.len() - 1)));
                }
                seen[n] += 1;
            }
        }
        if let Some(n) = seen.iter().position(|&c| c != 1) {
            return Err(PartitionViolation::NodeCoverage(n));
        }
        // every gate's nodes appear exactly once across fragments
        let mut per_gate = vec![0usize; g.num_gates()];
        for f in &self.fragments {
            for &n in &f.node_ids {
                let node = g.node(n);
                if node.partner.is_none_or(|p| p > n) {
                    per_gate[node.gate_ref] += 1;
                }
            }
        }
        if let Some((gate_ref, &count)) = per_gate.iter().enumerate().find(|(_, &c)| c != 1) {
            return Err(PartitionViolation::GateCoverage { gate_ref, count });
        }
        let mut scratch = vec![0u32; g.len()];
        for f in &self.fragments {
            let width = metrics::fragment_width(g, &self.assignment, &f.node_ids);
            let depth = metrics::fragment_depth(g, &self.assignment, &f.node_ids, &mut scratch);
            if width != f.width || depth != f.depth {
                return Err(PartitionViolation::StaleMetrics(f.id));
            }
            if f.width > q_con {
                return Err(PartitionViolation::Width {
                    id: f.id,
                    width: f.width,
                    limit: q_con,
                });
            }
        }
        let mut expected: Vec<usize> = g
            .edges()
            .iter()
            .filter(|e| self.assignment[e.src] != self.assignment[e.dst])
            .map(|e| e.id)
            .collect();
        let mut got: Vec<usize> = self.cuts.iter().map(|c| c.edge.id).collect();
        expected.sort_unstable();
        got.sort_unstable();
        if expected != got
            || self
                .cuts
                .iter()
                .any(|c| self.assignment[c.edge.src] == self.assignment[c.edge.dst])
        {
            return Err(PartitionViolation::CutSet);
        }
        Ok(())
    }
}

fn crossing_cuts(g: &CircuitGraph, assignment: &[usize]) -> Vec<Cut> {
    g.edges()
        .iter()
        .filter(|e| assignment[e.src] != assignment[e.dst])
        .map(|e| Cut {
            edge: e.clone(),
            kind: e.kind.cut_kind(),
            fragments: (assignment[e.src], assignment[e.dst]),
            gamma: e.weight,
            gate: g.node(e.src).kind,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionConfig {
    pub min_fold_len: usize,
    pub wl_iterations: usize,
    /// Objective mode used by refinement.
    pub gamma_mode: GammaMode,
    pub refine_passes: usize,
    /// Worker cap; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            min_fold_len: DEFAULT_MIN_LEN,
            wl_iterations: WL_ITERATIONS,
            gamma_mode: GammaMode::Theoretical,
            refine_passes: MAX_REFINE_PASSES,
            threads: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StageTimings {
    pub fold: Duration,
    pub module_find: Duration,
    pub merge: Duration,
    pub refine: Duration,
}

/// Full pipeline output with intermediate artifacts.
#[derive(Debug, Clone)]
pub struct PartitionRun {
    pub graph: CircuitGraph,
    pub meta: Option<MetaGraph>,
    pub initial: Option<InitialPartition>,
    pub partition: Partition,
    pub timings: StageTimings,
}

pub fn partition_circuit(c: &Circuit, q_con: usize, config: &PartitionConfig) -> Result<Partition, PartitionError> {
    partition_circuit_detailed(c, q_con, config).map(|r| r.partition)
}

pub fn partition_circuit_detailed(
    c: &Circuit,
    q_con: usize,
    config: &PartitionConfig,
) -> Result<PartitionRun, PartitionError> {
    if q_con < 2 {
        return Err(PartitionError::ConstraintTooSmall(q_con));
    }
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| PartitionError::ThreadPool(e.to_string()))?
            .install(|| run_pipeline(c, q_con, config)),
        None => run_pipeline(c, q_con, config),
    }
}

fn run_pipeline(c: &Circuit, q_con: usize, config: &PartitionConfig) -> Result<PartitionRun, PartitionError> {
    let graph = build_circuit_graph(c);
    if c.num_qubits() <= q_con {
        let partition = Partition::single(&graph);
        return Ok(PartitionRun {
            graph,
            meta: None,
            initial: None,
            partition,
            timings: StageTimings::default(),
        });
    }
    let mut timings = StageTimings::default();

    let t = Instant::now();
    let qubit_graphs = extract_qubit_graphs(&graph);
    let meta = fold(&qubit_graphs, &graph, config.min_fold_len)?;
    timings.fold = t.elapsed();

    let t = Instant::now();
    let initial = module_finding(&graph, &meta, q_con, config.wl_iterations)?;
    timings.module_find = t.elapsed();

    let t = Instant::now();
    let merged = greedy_merge(&graph, &initial.supernodes(), q_con);
    timings.merge = t.elapsed();

    let t = Instant::now();
    let partition = refine(&merged, &graph, q_con, config.gamma_mode, config.refine_passes);
    timings.refine = t.elapsed();

    Ok(PartitionRun {
        graph,
        meta: Some(meta),
        initial: Some(initial),
        partition,
        timings,
    })
}

/// Convenience: kinds of edges crossing between two fragments.
pub fn crossing_kinds(p: &Partition, a: usize, b: usize) -> Vec<EdgeKind> {
    p.cuts
        .iter()
        .filter(|c| {
            let (x, y) = c.fragments;
            (x == a && y == b) || (x == b && y == a)
        })
        .map(|c| c.edge.kind)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gen_ghz;

    #[test]
    fn from_assignment_renumbers_by_first_node() {
        let g = build_circuit_graph(&gen_ghz(4).unwrap());
        let labels: Vec<usize> = g.nodes().iter().map(|n| if n.qubit < 2 { 7 } else { 3 }).collect();
        let p = Partition::from_assignment(&g, &labels);
        assert_eq!(p.fragments.len(), 2);
        assert_eq!(p.fragment_of(0), 0);
        assert_eq!(p.cuts.len(), 1);
        assert_eq!(p.cuts[0].kind, CutKind::Gate);
        assert_eq!(p.cuts[0].gamma, 9.0);
        p.validate(&g, 2).unwrap();
        assert!(matches!(p.validate(&g, 1), Err(PartitionViolation::Width { .. })));
    }

    #[test]
    fn fits_short_circuits() {
        let c = gen_ghz(5).unwrap();
        let p = partition_circuit(&c, 5, &PartitionConfig::default()).unwrap();
        assert_eq!(p.fragments.len(), 1);
        assert!(p.cuts.is_empty());
    }

    #[test]
    fn rejects_constraint_one() {
        assert_eq!(
            partition_circuit(&gen_ghz(4).unwrap(), 1, &PartitionConfig::default()),
            Err(PartitionError::ConstraintTooSmall(1))
        );
    }
}
