//! Cut classification: single, parallel and blackbox.
//!
//! Gate cuts are always single. Wire cuts are bucketed by their ordered
//! `(upstream, downstream)` fragment pair. Each wire cut spans the open time
//! window between the gates on either side of the cut edge; cuts whose windows
//! share a common instant can be cut together and form a parallel group. A
//! group whose common window holds an operation of a third fragment on a
//! qubit lying between the group's wires is a blackbox.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::{CircuitGraph, EdgeId};
use crate::partition::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CutClass {
    Single,
    Parallel,
    Blackbox,
}

impl CutClass {
    pub fn name(self) -> &'static str {
        match self {
            CutClass::Single => "single",
            CutClass::Parallel => "parallel",
            CutClass::Blackbox => "blackbox",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutGroup {
    pub class: CutClass,
    /// Indices into `Partition::cuts`.
    pub cuts: Vec<usize>,
    pub fragments: (usize, usize),
}

pub fn group_parallel_cuts(p: &Partition, g: &CircuitGraph) -> Vec<CutGroup> {
    let mut out = Vec::new();
    let mut buckets: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, cut) in p.cuts.iter().enumerate() {
        match cut.edge.kind {
            crate::graph::EdgeKind::Gate => out.push(CutGroup {
                class: CutClass::Single,
                cuts: vec![i],
                fragments: cut.fragments,
            }),
            crate::graph::EdgeKind::Wire => buckets.entry(cut.fragments).or_default().push(i),
        }
    }
    for (pair, idx) in buckets {
        let edges: Vec<EdgeId> = idx.iter().map(|&i| p.cuts[i].edge.id).collect();
        for (class, members) in classify_wire_bucket(g, p.assignment(), pair, &edges) {
            out.push(CutGroup {
                class,
                cuts: members.into_iter().map(|k| idx[k]).collect(),
                fragments: pair,
            });
        }
    }
    out.sort_by(|a, b| a.cuts[0].cmp(&b.cuts[0]));
    out
}

/// Splits the wire-cut edges of one ordered fragment pair into groups.
/// Returned members are positions in `edges`.
pub(crate) fn classify_wire_bucket(
    g: &CircuitGraph,
    assignment: &[usize],
    pair: (usize, usize),
    edges: &[EdgeId],
) -> Vec<(CutClass, Vec<usize>)> {
    // open intervals (start, end) of gate indices
    let mut iv: Vec<(usize, usize, usize)> = edges
        .iter()
        .enumerate()
        .map(|(k, &e)| {
            let e = g.edge(e);
            (g.node(e.src).gate_ref, g.node(e.dst).gate_ref, k)
        })
        .collect();
    iv.sort_by_key(|&(s, e, k)| (e, s, k));
    let mut taken = vec![false; iv.len()];
    let mut out = Vec::new();
    for i in 0..iv.len() {
        if taken[i] {
            continue;
        }
        let end = iv[i].1;
        let mut members = Vec::new();
        let mut start = 0usize;
        for j in i..iv.len() {
            if !taken[j] && iv[j].0 < end {
                taken[j] = true;
                start = start.max(iv[j].0);
                members.push(iv[j].2);
            }
        }
        members.sort_unstable();
        let class = if members.len() < 2 {
            CutClass::Single
        } else if third_party_between(g, assignment, pair, edges, &members, start, end) {
            CutClass::Blackbox
        } else {
            CutClass::Parallel
        };
        out.push((class, members));
    }
    out
}

fn third_party_between(
    g: &CircuitGraph,
    assignment: &[usize],
    pair: (usize, usize),
    edges: &[EdgeId],
    members: &[usize],
    start: usize,
    end: usize,
) -> bool {
    let qubits = members.iter().map(|&k| g.node(g.edge(edges[k]).src).qubit);
    let (lo, hi) = qubits.fold((usize::MAX, 0), |(lo, hi), q| (lo.min(q), hi.max(q)));
    ((start + 1)..end).any(|gate| {
        let (a, b) = g.gate_nodes(gate);
        std::iter::once(a).chain(b).any(|n| {
            let node = g.node(n);
            let f = assignment[n];
            node.qubit > lo && node.qubit < hi && f != pair.0 && f != pair.1
        })
    })
}
