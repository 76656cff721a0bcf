use crate::graph::CircuitGraph;

/// Greedy maximum-weight matching of qubit groups.
///
/// `groups[k]` is the set of qubits owned by group `k`. The weight of a pair
/// is the number of two-qubit gates with one operand in each group. Pairs are
/// taken in order of decreasing weight, ties by the pair's smaller qubit
/// indices; zero-weight pairs are matched too. Each returned pair lists the
/// group holding the smaller qubit first. With an odd number of groups one
/// group stays unmatched.
pub fn most_entangled_pairs(groups: &[Vec<usize>], g: &CircuitGraph) -> Vec<(usize, usize)> {
    let k = groups.len();
    let mut group_of = vec![usize::MAX; g.num_qubits()];
    let mut min_qubit = vec![usize::MAX; k];
    for (gi, qs) in groups.iter().enumerate() {
        for &q in qs {
            group_of[q] = gi;
            min_qubit[gi] = min_qubit[gi].min(q);
        }
    }
    let mut weight = vec![0u64; k * k];
    for r in 0..g.num_gates() {
        let (a, Some(b)) = g.gate_nodes(r) else {
            continue;
        };
        let (x, y) = (group_of[g.node(a).qubit], group_of[g.node(b).qubit]);
        if x != y && x != usize::MAX && y != usize::MAX {
            weight[x * k + y] += 1;
            weight[y * k + x] += 1;
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| min_qubit[i]);
    let mut cands = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for (ai, &a) in order.iter().enumerate() {
        for &b in &order[ai + 1..] {
            cands.push((std::cmp::Reverse(weight[a * k + b]), min_qubit[a], min_qubit[b], a, b));
        }
    }
    cands.sort_unstable();
    let mut used = vec![false; k];
    let mut pairs = Vec::with_capacity(k / 2);
    for (_, _, _, a, b) in cands {
        if !used[a] && !used[b] {
            used[a] = true;
            used[b] = true;
            pairs.push((a, b));
        }
    }
    pairs.sort_by_key(|&(a, _)| min_qubit[a]);
    pairs
}
