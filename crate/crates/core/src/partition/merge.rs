//! Greedy coarsening of supernodes under the qubit constraint.
//!
//! Each step merges the adjacent pair whose crossing edges carry the largest
//! Σ ln γ, among pairs whose merged width fits. Ties prefer the wider
//! result, then the smallest ids.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap};

use super::Partition;
use crate::graph::{CircuitGraph, EdgeKind, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supernode {
    pub nodes: Vec<NodeId>,
    pub width: usize,
}

/// Multiset of γ weights on the edges between two supernodes.
#[derive(Debug, Clone, Default)]
struct Crossing {
    wires: usize,
    /// `(weight bits, count)`, sorted by weight.
    weights: Vec<(u64, usize)>,
}

impl Crossing {
    fn add(&mut self, kind: EdgeKind, weight: f64, count: usize) {
        if kind == EdgeKind::Wire {
            self.wires += count;
        }
        let bits = weight.to_bits();
        match self
            .weights
            .binary_search_by(|(b, _)| f64::from_bits(*b).total_cmp(&weight))
        {
            Ok(i) => self.weights[i].1 += count,
            Err(i) => self.weights.insert(i, (bits, count)),
        }
    }

    fn absorb(&mut self, other: &Crossing) {
        self.wires += other.wires;
        for &(b, c) in &other.weights {
            self.add(EdgeKind::Gate, f64::from_bits(b), c);
        }
    }

    fn ln_gamma(&self) -> f64 {
        self.weights
            .iter()
            .map(|&(b, c)| c as f64 * f64::from_bits(b).ln())
            .sum()
    }
}

#[derive(PartialEq)]
struct Candidate {
    gain: f64,
    width: usize,
    pair: (usize, usize),
    versions: (u64, u64),
}

impl Eq for Candidate {}

impl Ord for Candidate {
    fn cmp(&self, o: &Self) -> Ordering {
        self.gain
            .total_cmp(&o.gain)
            .then(self.width.cmp(&o.width))
            .then(Reverse(self.pair).cmp(&Reverse(o.pair)))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

pub fn greedy_merge(g: &CircuitGraph, supernodes: &[Supernode], q_con: usize) -> Partition {
    let mut label = vec![usize::MAX; g.len()];
    for (i, s) in supernodes.iter().enumerate() {
        for &n in &s.nodes {
            label[n] = i;
        }
    }
    let mut members: Vec<Vec<NodeId>> = supernodes.iter().map(|s| s.nodes.clone()).collect();
    let mut width: Vec<usize> = supernodes.iter().map(|s| s.width).collect();
    let mut alive = vec![true; supernodes.len()];
    let mut version = vec![0u64; supernodes.len()];
    let mut adj: Vec<HashMap<usize, Crossing>> = vec![HashMap::new(); supernodes.len()];
    for e in g.edges() {
        let (a, b) = (label[e.src], label[e.dst]);
        if a != b {
            adj[a].entry(b).or_default().add(e.kind, e.weight, 1);
            adj[b].entry(a).or_default().add(e.kind, e.weight, 1);
        }
    }

    let candidate = |a: usize, b: usize, c: &Crossing, width: &[usize], version: &[u64]| {
        let w = width[a] + width[b] - c.wires;
        (w <= q_con).then(|| {
            let pair = key(a, b);
            Candidate {
                gain: c.ln_gamma(),
                width: w,
                pair,
                versions: (version[pair.0], version[pair.1]),
            }
        })
    };

    let mut heap = BinaryHeap::new();
    for (a, nbrs) in adj.iter().enumerate() {
        let mut ns: Vec<_> = nbrs.iter().filter(|(&b, _)| b > a).collect();
        ns.sort_by_key(|(&b, _)| b);
        for (&b, c) in ns {
            heap.extend(candidate(a, b, c, &width, &version));
        }
    }

    while let Some(cand) = heap.pop() {
        let (a, b) = cand.pair;
        if !alive[a] || !alive[b] || cand.versions != (version[a], version[b]) {
            continue;
        }
        // merge b into a
        let cross = adj[a].remove(&b).expect("candidate pair is adjacent");
        adj[b].remove(&a);
        width[a] = width[a] + width[b] - cross.wires;
        alive[b] = false;
        version[a] += 1;
        let moved: Vec<(usize, Crossing)> = adj[b].drain().collect();
        for (x, c) in moved {
            let xb = adj[x].remove(&b).expect("adjacency is symmetric");
            adj[x].entry(a).or_default().absorb(&xb);
            adj[a].entry(x).or_default().absorb(&c);
        }
        let nodes = std::mem::take(&mut members[b]);
        for &n in &nodes {
            label[n] = a;
        }
        members[a].extend(nodes);
        let mut ns: Vec<_> = adj[a].iter().collect();
        ns.sort_by_key(|(&x, _)| x);
        for (&x, c) in ns {
            heap.extend(candidate(a, x, c, &width, &version));
        }
    }

    Partition::from_assignment(g, &label)
}
