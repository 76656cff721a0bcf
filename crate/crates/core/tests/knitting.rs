mod common;

use circuit_fold::knit::{channel_identity_error, MAX_EXACT_CUTS};
use circuit_fold::{
    build_circuit_graph, gate_cut_decomposition, gen_ghz, gen_qft, oracle_expectation, reconstruct_expectation,
    wire_cut_decomposition, Circuit, Gate, GateKind, KnitError, Observable, Partition, Pauli, ReconstructionMode,
};
use proptest::prelude::*;

fn observable(n: usize) -> impl Strategy<Value = Observable> {
    prop::collection::vec(prop::sample::select(vec![Pauli::I, Pauli::X, Pauli::Y, Pauli::Z]), n)
        .prop_map(Observable::new)
}

fn case() -> impl Strategy<Value = (Circuit, Vec<usize>, Observable)> {
    common::circuit_with(2..=6, 1..=14, common::cuttable_kinds()).prop_flat_map(|c| {
        let n = build_circuit_graph(&c).len();
        let q = c.num_qubits();
        (Just(c), prop::collection::vec(0..3usize, n), observable(q))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn exact_reconstruction_matches_oracle((c, labels, o) in case()) {
        let g = build_circuit_graph(&c);
        let p = Partition::from_assignment(&g, &labels);
        prop_assume!(p.cuts.len() <= MAX_EXACT_CUTS);
        let r = reconstruct_expectation::<f64>(&c, &p, &o, ReconstructionMode::Exact).unwrap();
        let want = oracle_expectation(&c, &o).unwrap();
        prop_assert!((r.value - want).abs() < 1e-8, "{} vs {}", r.value, want);
        let terms: u64 = p.cuts.iter().map(|cut| match cut.edge.kind {
            circuit_fold::EdgeKind::Wire => 8,
            circuit_fold::EdgeKind::Gate => gate_cut_decomposition::<f64>(cut.gate, &g.node(cut.edge.src).params).unwrap().len() as u64,
        }).product();
        prop_assert_eq!(r.evaluations, terms);
    }

    #[test]
    fn cp_identity_any_angle(theta in -6.3f64..6.3) {
        let d = gate_cut_decomposition::<f64>(GateKind::Cp, &[theta]).unwrap();
        prop_assert!(channel_identity_error(&d, 5, theta.to_bits()) < 1e-10);
    }
}

#[test]
fn channel_identities() {
    assert!(channel_identity_error(&wire_cut_decomposition::<f64>(), 100, 11) < 1e-10);
    for k in [GateKind::Cx, GateKind::Cz] {
        assert!(channel_identity_error(&gate_cut_decomposition::<f64>(k, &[]).unwrap(), 100, 12) < 1e-10);
    }
}

#[test]
fn qft4_two_cuts() {
    let c = gen_qft(4).unwrap();
    let g = build_circuit_graph(&c);
    // h0 and cp(0,1) on their own: two wire cuts
    let labels: Vec<usize> = g.nodes().iter().map(|n| usize::from(n.gate_ref > 1)).collect();
    let p = Partition::from_assignment(&g, &labels);
    assert_eq!(p.cuts.len(), 2);
    // all of qubit 0 plus cp(0,1): gate cuts at cp(0,2), cp(0,3), one wire cut
    let mixed: Vec<usize> = g
        .nodes()
        .iter()
        .map(|n| usize::from(n.qubit != 0 && n.gate_ref > 1))
        .collect();
    let q = Partition::from_assignment(&g, &mixed);
    assert_eq!(q.num_cuts(circuit_fold::CutKind::Gate), 2);
    assert_eq!(q.num_cuts(circuit_fold::CutKind::Wire), 1);
    for o in [Observable::all_z(4), "XIYZ".parse().unwrap()] {
        let want = oracle_expectation(&c, &o).unwrap();
        for part in [&p, &q] {
            let r = reconstruct_expectation::<f64>(&c, part, &o, ReconstructionMode::Exact).unwrap();
            assert!((r.value - want).abs() < 1e-8);
        }
    }
}

#[test]
fn ghz3_split() {
    let c = gen_ghz(3).unwrap();
    let g = build_circuit_graph(&c);
    let labels: Vec<usize> = g.nodes().iter().map(|n| usize::from(n.qubit >= 2)).collect();
    let p = Partition::from_assignment(&g, &labels);
    let r = reconstruct_expectation::<f64>(&c, &p, &Observable::all_z(3), ReconstructionMode::Exact).unwrap();
    assert!(r.value.abs() < 1e-8);
}

#[test]
fn swap_cut_is_rejected() {
    let c = Circuit::from_gates(2, vec![Gate::one(GateKind::H, 0), Gate::two(GateKind::Swap, 0, 1)]).unwrap();
    let g = build_circuit_graph(&c);
    let p = Partition::from_assignment(&g, &[0, 0, 1]);
    assert_eq!(
        reconstruct_expectation::<f64>(&c, &p, &Observable::all_z(2), ReconstructionMode::Exact),
        Err(KnitError::UnsupportedGateCut(GateKind::Swap))
    );
}

/// A QFT-3 split into three fragments with one wire cut and two gate cuts.
fn sampled_case() -> (Circuit, Partition, Observable) {
    let c = Circuit::from_gates(
        3,
        vec![
            Gate::one(GateKind::H, 0),
            Gate::rotation(GateKind::Ry, 0.7, 1),
            Gate::two(GateKind::Cx, 0, 1),
            Gate::one(GateKind::T, 1),
            Gate::cp(0.9, 1, 2),
            Gate::one(GateKind::H, 1),
            Gate::rotation(GateKind::Rx, 0.4, 2),
        ],
    )
    .unwrap();
    let g = build_circuit_graph(&c);
    // h0 ry1 | cx(0,1) t1 | cp(1,2) h1 rx2
    let labels = vec![0, 0, 0, 1, 1, 1, 2, 1, 2];
    let p = Partition::from_assignment(&g, &labels);
    (c, p, "ZZX".parse().unwrap())
}

#[test]
fn sampled_error_tracks_prediction() {
    let (c, p, o) = sampled_case();
    assert_eq!(p.cuts.len(), 3);
    let want = oracle_expectation(&c, &o).unwrap();
    let shots = 100_000;
    let mut total = 0.0;
    let mut se = 0.0;
    for seed in 0..30 {
        let r = reconstruct_expectation::<f64>(&c, &p, &o, ReconstructionMode::Sampled { shots, seed }).unwrap();
        total += (r.value - want).abs();
        se = r.std_error.unwrap();
        assert!((se - r.kappa / (shots as f64).sqrt()).abs() < 1e-12);
    }
    let mae = total / 30.0;
    assert!(mae <= 3.0 * se, "mean error {mae} vs 3 se {}", 3.0 * se);
}

#[test]
fn sampled_error_shrinks_with_shots() {
    let (c, p, o) = sampled_case();
    let want = oracle_expectation(&c, &o).unwrap();
    let mae = |shots: usize| {
        (0..20)
            .map(|seed| {
                let r =
                    reconstruct_expectation::<f64>(&c, &p, &o, ReconstructionMode::Sampled { shots, seed }).unwrap();
                (r.value - want).abs()
            })
            .sum::<f64>()
            / 20.0
    };
    assert!(mae(40_000) < mae(2_500));
}

#[test]
fn single_precision_reconstruction() {
    let c = gen_ghz(4).unwrap();
    let g = build_circuit_graph(&c);
    let labels: Vec<usize> = g.nodes().iter().map(|n| usize::from(n.qubit >= 2)).collect();
    let p = Partition::from_assignment(&g, &labels);
    let r = reconstruct_expectation::<f32>(&c, &p, &Observable::all_z(4), ReconstructionMode::Exact).unwrap();
    assert!((r.value - 1.0).abs() < 1e-4);
}
