//! Expectation reconstruction from cut fragments.
//!
//! Every fragment runs on its own register with one simulated qubit per wire
//! segment it owns. A segment that starts at a wire cut begins in the state
//! the cut's term prepares; one that ends at a wire cut is measured in the
//! term's Pauli basis. Gate-cut halves run the term's local operations, with
//! mid-circuit Z measurements handled by branching on the outcome. Terminal
//! measurements and the observable combine into one Pauli string per
//! fragment, so each fragment yields one expectation per term choice.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::qpd::{gate_cut_decomposition, wire_cut_decomposition, QpdAction, QpdDecomposition, Step};
use super::sim::{StateVector, MAX_QUBITS};
use super::KnitError;
use crate::circuit::{Circuit, GateKind, Observable, Pauli};
use crate::graph::{build_circuit_graph, CircuitGraph, EdgeKind, NodeId};
use crate::partition::Partition;
use crate::scalar::{CompensatedSum, Real};

pub const MAX_EXACT_CUTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReconstructionMode {
    Exact,
    Sampled { shots: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction<T: Real> {
    pub value: T,
    /// Term combinations summed (exact) or shots drawn (sampled).
    pub evaluations: u64,
    /// `Π_k Σ_i |a_ki|`, the square root of the total sampling weight.
    pub kappa: T,
    /// Predicted standard error `kappa / sqrt(shots)` in sampled mode.
    pub std_error: Option<T>,
}

#[derive(Debug, Clone)]
enum Op {
    Gate(GateKind, Vec<f64>, Vec<usize>),
    /// Gate-cut half: cut index, first operand?, local qubit.
    Half(usize, bool, usize),
}

#[derive(Debug, Clone, Copy)]
enum SegEnd {
    Observable(usize),
    Measured(usize),
}

#[derive(Debug, Clone)]
struct FragmentProgram {
    width: usize,
    /// Incident cut indices, ascending.
    cuts: Vec<usize>,
    /// `(cut, local qubit)` preparations.
    preps: Vec<(usize, usize)>,
    ops: Vec<Op>,
    ends: Vec<SegEnd>,
}

fn compile(g: &CircuitGraph, p: &Partition, fid: usize, cut_of_edge: &HashMap<usize, usize>) -> FragmentProgram {
    let frag = &p.fragments[fid];
    let a = p.assignment();
    let mut seg: HashMap<NodeId, usize> = HashMap::new();
    let mut prog = FragmentProgram {
        width: 0,
        cuts: Vec::new(),
        preps: Vec::new(),
        ops: Vec::new(),
        ends: Vec::new(),
    };
    let wire_cut = |from: NodeId, to: NodeId| {
        g.incident_edges(from)
            .find(|e| e.kind == EdgeKind::Wire && e.src == from && e.dst == to)
            .map(|e| cut_of_edge[&e.id])
            .expect("crossing wire is a cut")
    };
    for &n in &frag.node_ids {
        let local = match g.wire_prev(n) {
            Some(m) if a[m] == fid => seg[&m],
            prev => {
                let s = prog.width;
                prog.width += 1;
                prog.ends.push(SegEnd::Observable(g.node(n).qubit));
                if let Some(m) = prev {
                    let c = wire_cut(m, n);
                    prog.preps.push((c, s));
                    prog.cuts.push(c);
                }
                s
            }
        };
        seg.insert(n, local);
        if let Some(m) = g.wire_next(n) {
            if a[m] != fid {
                let c = wire_cut(n, m);
                prog.ends[local] = SegEnd::Measured(c);
                prog.cuts.push(c);
            }
        }
    }
    for &n in &frag.node_ids {
        let node = g.node(n);
        match node.partner {
            None => prog.ops.push(Op::Gate(node.kind, node.params.clone(), vec![seg[&n]])),
            Some(q) if a[q] == fid => {
                if q > n {
                    prog.ops
                        .push(Op::Gate(node.kind, node.params.clone(), vec![seg[&n], seg[&q]]));
                }
            }
            Some(q) => {
                let gate_edge = g
                    .incident_edges(n)
                    .find(|e| e.kind == EdgeKind::Gate)
                    .expect("two-qubit node has a gate edge");
                let c = cut_of_edge[&gate_edge.id];
                prog.ops.push(Op::Half(c, n < q, seg[&n]));
                prog.cuts.push(c);
            }
        }
    }
    prog.cuts.sort_unstable();
    prog.cuts.dedup();
    prog
}

struct Knitter<T: Real> {
    programs: Vec<FragmentProgram>,
    decomps: Vec<QpdDecomposition<T>>,
    /// Per cut: side of the wire, `true` for the upstream fragment.
    observable: Vec<Pauli>,
    idle_factor: T,
}

impl<T: Real> Knitter<T> {
    fn run(&self, prog: &FragmentProgram, terms: &[usize]) -> T {
        let term = |c: usize| &self.decomps[c].terms[terms[c]];
        let mut s = StateVector::<T>::zero(prog.width).expect("width checked");
        for &(c, q) in &prog.preps {
            let QpdAction::Prepare(p) = term(c).right else {
                unreachable!("wire terms prepare downstream")
            };
            for &g in p.gates() {
                s.apply(g, &[], &[q]);
            }
        }
        let mut branches = vec![(T::one(), s)];
        for op in &prog.ops {
            match op {
                Op::Gate(k, params, qs) => branches.iter_mut().for_each(|(_, s)| s.apply(*k, params, qs)),
                Op::Half(c, first, q) => {
                    let t = term(*c);
                    let QpdAction::Ops(steps) = (if *first { &t.left } else { &t.right }) else {
                        unreachable!("gate terms are local operations")
                    };
                    for step in steps {
                        match step {
                            Step::Gate(k, params) => branches.iter_mut().for_each(|(_, s)| s.apply(*k, params, &[*q])),
                            Step::MeasureZ => {
                                let mut next = Vec::with_capacity(branches.len() * 2);
                                for (w, s) in branches {
                                    let mut one = s.clone();
                                    let mut zero = s;
                                    if zero.project(*q, false) > T::lit(1e-30) {
                                        next.push((w, zero));
                                    }
                                    if one.project(*q, true) > T::lit(1e-30) {
                                        next.push((-w, one));
                                    }
                                }
                                branches = next;
                            }
                        }
                    }
                }
            }
        }
        let paulis: Vec<Pauli> = prog
            .ends
            .iter()
            .map(|e| match *e {
                SegEnd::Observable(q) => self.observable[q],
                SegEnd::Measured(c) => match term(c).left {
                    QpdAction::Measure(p) => p,
                    _ => unreachable!("wire terms measure upstream"),
                },
            })
            .collect();
        branches
            .iter()
            .map(|(w, s)| *w * s.pauli_expectation(&paulis))
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// Mixed-radix index of a fragment's incident term choice.
    fn local_index(&self, prog: &FragmentProgram, terms: &[usize]) -> usize {
        prog.cuts
            .iter()
            .fold(0, |acc, &c| acc * self.decomps[c].len() + terms[c])
    }

    fn table(&self, prog: &FragmentProgram, ncuts: usize) -> Vec<T> {
        let size: usize = prog.cuts.iter().map(|&c| self.decomps[c].len()).product();
        (0..size)
            .into_par_iter()
            .map(|mut idx| {
                let mut terms = vec![0; ncuts];
                for &c in prog.cuts.iter().rev() {
                    let m = self.decomps[c].len();
                    terms[c] = idx % m;
                    idx /= m;
                }
                self.run(prog, &terms)
            })
            .collect()
    }

    fn kappa(&self) -> T {
        self.decomps.iter().map(|d| d.one_norm()).fold(T::one(), |a, b| a * b)
    }
}

fn build<T: Real>(c: &Circuit, p: &Partition, o: &Observable) -> Result<(CircuitGraph, Knitter<T>), KnitError> {
    let g = build_circuit_graph(c);
    if p.assignment().len() != g.len() {
        return Err(KnitError::PartitionMismatch);
    }
    if o.len() != c.num_qubits() {
        return Err(KnitError::ObservableLength {
            expected: c.num_qubits(),
            got: o.len(),
        });
    }
    if let Some(f) = p.fragments.iter().find(|f| f.width > MAX_QUBITS) {
        return Err(KnitError::FragmentTooWide {
            id: f.id,
            width: f.width,
            max: MAX_QUBITS,
        });
    }
    let decomps = p
        .cuts
        .iter()
        .map(|cut| match cut.edge.kind {
            EdgeKind::Wire => Ok(wire_cut_decomposition()),
            EdgeKind::Gate => {
                let node = g.node(cut.edge.src);
                gate_cut_decomposition(node.kind, &node.params)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cut_of_edge: HashMap<usize, usize> = p.cuts.iter().enumerate().map(|(i, c)| (c.edge.id, i)).collect();
    let programs = (0..p.fragments.len())
        .map(|f| compile(&g, p, f, &cut_of_edge))
        .collect();
    let idle_factor = g
        .qubit_heads()
        .iter()
        .enumerate()
        .filter(|(_, h)| h.is_none())
        .map(|(q, _)| match o.paulis()[q] {
            Pauli::I | Pauli::Z => T::one(),
            Pauli::X | Pauli::Y => T::zero(),
        })
        .fold(T::one(), |a, b| a * b);
    let knitter = Knitter {
        programs,
        decomps,
        observable: o.paulis().to_vec(),
        idle_factor,
    };
    Ok((g, knitter))
}

/// Reconstructs `⟨o⟩` of `c` from the fragments of `p`.
pub fn reconstruct_expectation<T: Real>(
    c: &Circuit,
    p: &Partition,
    o: &Observable,
    mode: ReconstructionMode,
) -> Result<Reconstruction<T>, KnitError> {
    let (_, k) = build::<T>(c, p, o)?;
    let ncuts = k.decomps.len();
    match mode {
        ReconstructionMode::Exact => {
            if ncuts > MAX_EXACT_CUTS {
                return Err(KnitError::TooManyCuts {
                    n: ncuts,
                    max: MAX_EXACT_CUTS,
                });
            }
            let tables: Vec<Vec<T>> = k.programs.iter().map(|prog| k.table(prog, ncuts)).collect();
            let total: usize = k.decomps.iter().map(|d| d.len()).product();
            let mut acc = CompensatedSum::default();
            let mut terms = vec![0usize; ncuts];
            for mut idx in 0..total {
                for (c, d) in k.decomps.iter().enumerate().rev() {
                    terms[c] = idx % d.len();
                    idx /= d.len();
                }
                let coeff = (0..ncuts).fold(T::one(), |a, c| a * k.decomps[c].terms[terms[c]].coefficient);
                let prod = k
                    .programs
                    .iter()
                    .zip(&tables)
                    .fold(coeff, |a, (prog, t)| a * t[k.local_index(prog, &terms)]);
                acc.add(prod);
            }
            Ok(Reconstruction {
                value: acc.value() * k.idle_factor,
                evaluations: total as u64,
                kappa: k.kappa(),
                std_error: None,
            })
        }
        ReconstructionMode::Sampled { shots, seed } => {
            if shots == 0 {
                return Err(KnitError::NoShots);
            }
            let kappa = k.kappa();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut memo: Vec<HashMap<usize, T>> = vec![HashMap::new(); k.programs.len()];
            let mut terms = vec![0usize; ncuts];
            let mut acc = CompensatedSum::default();
            for _ in 0..shots {
                let mut sign = T::one();
                for (c, d) in k.decomps.iter().enumerate() {
                    let mut u = T::lit(rng.random::<f64>()) * d.one_norm();
                    let mut pick = d.len() - 1;
                    for (i, t) in d.terms.iter().enumerate() {
                        let w = t.coefficient.abs();
                        if u < w {
                            pick = i;
                            break;
                        }
                        u = u - w;
                    }
                    terms[c] = pick;
                    if d.terms[pick].coefficient < T::zero() {
                        sign = -sign;
                    }
                }
                let mut outcome = T::one();
                for (f, prog) in k.programs.iter().enumerate() {
                    let idx = k.local_index(prog, &terms);
                    let e = *memo[f].entry(idx).or_insert_with(|| k.run(prog, &terms));
                    let p_plus = ((T::one() + e) / T::lit(2.0)).max(T::zero()).min(T::one());
                    if T::lit(rng.random::<f64>()) >= p_plus {
                        outcome = -outcome;
                    }
                }
                acc.add(kappa * sign * outcome);
            }
            let n = T::lit(shots as f64);
            Ok(Reconstruction {
                value: acc.value() / n * k.idle_factor,
                evaluations: shots as u64,
                kappa,
                std_error: Some(kappa / n.sqrt()),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_bv, gen_ghz, gen_qft, Gate};
    use crate::knit::{expectation, simulate};

    fn oracle(c: &Circuit, o: &Observable) -> f64 {
        expectation(&simulate::<f64>(c).unwrap(), o).unwrap()
    }

    fn by_qubit(c: &Circuit, split: usize) -> (CircuitGraph, Partition) {
        let g = build_circuit_graph(c);
        let labels: Vec<usize> = g.nodes().iter().map(|n| usize::from(n.qubit >= split)).collect();
        let p = Partition::from_assignment(&g, &labels);
        (g, p)
    }

    #[test]
    fn uncut_matches_oracle() {
        let c = gen_qft(3).unwrap();
        let g = build_circuit_graph(&c);
        let p = Partition::single(&g);
        let o: Observable = "XZY".parse().unwrap();
        let r = reconstruct_expectation::<f64>(&c, &p, &o, ReconstructionMode::Exact).unwrap();
        assert!((r.value - oracle(&c, &o)).abs() < 1e-10);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn ghz4_gate_cut() {
        let c = gen_ghz(4).unwrap();
        let (_, p) = by_qubit(&c, 2);
        assert_eq!(p.cuts.len(), 1);
        let r = reconstruct_expectation::<f64>(&c, &p, &Observable::all_z(4), ReconstructionMode::Exact).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
        assert_eq!(r.evaluations, 6);
        assert!((r.kappa - 3.0).abs() < 1e-12);
    }

    #[test]
    fn wire_cut_on_single_line() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::one(GateKind::H, 0),
                Gate::rotation(GateKind::Ry, 0.4, 0),
                Gate::two(GateKind::Cx, 0, 1),
                Gate::one(GateKind::S, 0),
                Gate::one(GateKind::H, 0),
            ],
        )
        .unwrap();
        let g = build_circuit_graph(&c);
        // h, ry | cx both halves, s, h
        let labels = vec![0, 0, 1, 1, 1, 1];
        assert_eq!(g.len(), labels.len());
        let p = Partition::from_assignment(&g, &labels);
        for obs in ["ZZ", "XI", "YZ", "IX"] {
            let o: Observable = obs.parse().unwrap();
            let r = reconstruct_expectation::<f64>(&c, &p, &o, ReconstructionMode::Exact).unwrap();
            assert!((r.value - oracle(&c, &o)).abs() < 1e-10, "{obs}");
        }
    }

    #[test]
    fn bv_data_qubits() {
        let c = gen_bv("11").unwrap();
        let g = build_circuit_graph(&c);
        // cut the ancilla wire between its two cx targets
        let anc = g.qubit_path(2);
        let labels: Vec<usize> = (0..g.len())
            .map(|n| {
                let node = g.node(n);
                let late = node.qubit == 1 || (node.qubit == 2 && n >= anc[3]);
                usize::from(late)
            })
            .collect();
        let p = Partition::from_assignment(&g, &labels);
        assert_eq!(p.cuts.len(), 1);
        assert_eq!(p.cuts[0].kind, crate::cost::CutKind::Wire);
        for q in 0..2 {
            let r = reconstruct_expectation::<f64>(&c, &p, &Observable::z_on(3, q), ReconstructionMode::Exact).unwrap();
            assert!((r.value + 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn idle_qubit_factor() {
        let c = Circuit::from_gates(3, vec![Gate::one(GateKind::X, 0), Gate::one(GateKind::H, 2)]).unwrap();
        let g = build_circuit_graph(&c);
        let p = Partition::from_assignment(&g, &[0, 1]);
        let z: Observable = "ZZX".parse().unwrap();
        let r = reconstruct_expectation::<f64>(&c, &p, &z, ReconstructionMode::Exact).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        let x: Observable = "ZXX".parse().unwrap();
        let r = reconstruct_expectation::<f64>(&c, &p, &x, ReconstructionMode::Exact).unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn sampled_is_seeded() {
        let c = gen_ghz(4).unwrap();
        let (_, p) = by_qubit(&c, 2);
        let o = Observable::all_z(4);
        let mode = ReconstructionMode::Sampled { shots: 2000, seed: 5 };
        let a = reconstruct_expectation::<f64>(&c, &p, &o, mode).unwrap();
        let b = reconstruct_expectation::<f64>(&c, &p, &o, mode).unwrap();
        assert_eq!(a, b);
        let se = a.std_error.unwrap();
        assert!((a.value - 1.0).abs() < 5.0 * se);
    }

    #[test]
    fn exact_cut_limit() {
        let c = gen_qft(4).unwrap();
        let g = build_circuit_graph(&c);
        let labels: Vec<usize> = g.nodes().iter().map(|n| n.qubit).collect();
        let p = Partition::from_assignment(&g, &labels);
        assert!(matches!(
            reconstruct_expectation::<f64>(&c, &p, &Observable::all_z(4), ReconstructionMode::Exact),
            Err(KnitError::TooManyCuts { .. })
        ));
    }
}
