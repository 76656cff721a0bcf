use super::{Partition, PartitionError};
use crate::graph::CircuitGraph;

/// Contiguous blocks of `q_con` qubits; every crossing edge is a cut.
pub fn naive_baseline(g: &CircuitGraph, q_con: usize) -> Result<Partition, PartitionError> {
    if q_con < 2 {
        return Err(PartitionError::ConstraintTooSmall(q_con));
    }
    let labels: Vec<usize> = g.nodes().iter().map(|n| n.qubit / q_con).collect();
    Ok(Partition::from_assignment(g, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_ghz, gen_qft};
    use crate::cost::CutKind;
    use crate::graph::build_circuit_graph;

    #[test]
    fn ghz8_blocks() {
        let g = build_circuit_graph(&gen_ghz(8).unwrap());
        let p = naive_baseline(&g, 4).unwrap();
        assert_eq!(p.fragments.len(), 2);
        assert_eq!(p.fragments[0].qubits(&g), vec![0, 1, 2, 3]);
        assert_eq!(p.num_cuts(CutKind::Gate), 1);
        assert_eq!(p.cuts.len(), 1);
    }

    #[test]
    fn qft8_cross_block_phases() {
        let g = build_circuit_graph(&gen_qft(8).unwrap());
        let p = naive_baseline(&g, 4).unwrap();
        assert_eq!(p.num_cuts(CutKind::Gate), 16);
        assert_eq!(p.num_cuts(CutKind::Wire), 0);
    }

    #[test]
    fn fits_in_one_block() {
        let g = build_circuit_graph(&gen_ghz(3).unwrap());
        assert_eq!(naive_baseline(&g, 4).unwrap().fragments.len(), 1);
    }
}
