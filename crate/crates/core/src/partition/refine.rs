//! Boundary refinement by first-improvement hill climbing on ln QRO.
//!
//! Candidate moves, in order: every boundary node (id order) to each
//! adjacent fragment (id order), then the same for two-node blocks (a node
//! with its wire successor, a node with its gate partner), then a swap of the
//! two endpoints of every crossing edge (edge order), then absorbing a whole
//! fragment into an adjacent one. A move is kept when it strictly lowers QRO and
//! leaves every width within the constraint.
//!
//! Evaluation is incremental. ASAP levels are repaired by forward
//! propagation from the touched nodes, per-fragment depth comes from a
//! multiset of end levels, and only the wire-cut buckets that involve a
//! touched fragment are regrouped. All changes go through an undo log.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::Partition;
use crate::cost::{classify_wire_bucket, CutClass, GammaMode, GammaTable};
use crate::graph::{CircuitGraph, EdgeId, EdgeKind, NodeId};

pub const MAX_REFINE_PASSES: usize = 10;

/// Minimum drop in ln QRO that counts as an improvement.
const IMPROVEMENT_EPS: f64 = 1e-12;

type Pair = (usize, usize);

enum Undo {
    Assign(NodeId, usize),
    Level(NodeId, u32, u32, usize),
    Size(usize, usize, usize),
    Bucket(Pair, Option<BTreeSet<EdgeId>>),
    PairLn(Pair, Option<f64>),
    GateCount(usize, u64, i64),
}

struct State<'a> {
    g: &'a CircuitGraph,
    q_con: usize,
    mode: GammaMode,
    table: GammaTable<f64>,
    edge_ln: Vec<f64>,
    assign: Vec<usize>,
    size: Vec<usize>,
    width: Vec<usize>,
    level: Vec<u32>,
    end: Vec<u32>,
    /// Fragment whose multiset holds `end[n]`.
    counted: Vec<usize>,
    ends: Vec<BTreeMap<u32, usize>>,
    buckets: HashMap<Pair, BTreeSet<EdgeId>>,
    pairs_of: Vec<BTreeSet<Pair>>,
    pair_ln: HashMap<Pair, f64>,
    /// Gate-cut counts per fragment keyed by weight bits.
    gate_counts: Vec<BTreeMap<u64, i64>>,
    log: Vec<Undo>,
}

impl<'a> State<'a> {
    fn new(p: &Partition, g: &'a CircuitGraph, q_con: usize, mode: GammaMode) -> Self {
        let k = p.fragments.len();
        let table = GammaTable::<f64>::new(mode);
        let edge_ln = g
            .edges()
            .iter()
            .map(|e| {
                table
                    .lookup(e.kind.cut_kind(), Some(g.node(e.src).kind))
                    .unwrap_or(table.wire_single)
                    .ln()
            })
            .collect();
        let mut s = State {
            g,
            q_con,
            mode,
            table,
            edge_ln,
            assign: p.assignment().to_vec(),
            size: p.fragments.iter().map(|f| f.node_ids.len()).collect(),
            width: p.fragments.iter().map(|f| f.width).collect(),
            level: vec![0; g.len()],
            end: vec![0; g.len()],
            counted: vec![usize::MAX; g.len()],
            ends: vec![BTreeMap::new(); k],
            buckets: HashMap::new(),
            pairs_of: vec![BTreeSet::new(); k],
            pair_ln: HashMap::new(),
            gate_counts: vec![BTreeMap::new(); k],
            log: Vec::new(),
        };
        let all: BTreeSet<NodeId> = (0..g.len()).collect();
        s.propagate(all);
        for e in g.edges() {
            s.insert_edge(e.id);
        }
        let pairs: Vec<Pair> = s.buckets.keys().copied().collect();
        for pr in pairs {
            s.regroup(pr);
        }
        s.log.clear();
        s
    }

    fn wire_in(&self, x: NodeId) -> u32 {
        match self.g.wire_prev(x) {
            Some(q) if self.assign[q] == self.assign[x] => self.level[q],
            Some(_) => 1,
            None => 0,
        }
    }

    fn end_of(&self, x: NodeId, level: u32) -> u32 {
        let measured = self.g.wire_next(x).is_some_and(|m| self.assign[m] != self.assign[x]);
        level + u32::from(measured)
    }

    fn set_level(&mut self, x: NodeId, level: u32) -> bool {
        let end = self.end_of(x, level);
        let frag = self.assign[x];
        if level == self.level[x] && end == self.end[x] && frag == self.counted[x] {
            return false;
        }
        self.log
            .push(Undo::Level(x, self.level[x], self.end[x], self.counted[x]));
        if self.counted[x] != usize::MAX {
            multiset_remove(&mut self.ends[self.counted[x]], self.end[x]);
        }
        *self.ends[frag].entry(end).or_insert(0) += 1;
        let changed = level != self.level[x];
        self.level[x] = level;
        self.end[x] = end;
        self.counted[x] = frag;
        changed
    }

    /// Recomputes levels from `dirty` forward.
    fn propagate(&mut self, mut dirty: BTreeSet<NodeId>) {
        while let Some(x) = dirty.pop_first() {
            let node = self.g.node(x);
            let partner = node.partner.filter(|&p| self.assign[p] == self.assign[x]);
            let level = match partner {
                Some(p) => self.wire_in(x).max(self.wire_in(p)) + 1,
                None => self.wire_in(x) + 1,
            };
            for y in std::iter::once(x).chain(partner) {
                if y != x {
                    dirty.remove(&y);
                }
                self.set_level(y, level);
                // successors see level and fragment membership
                if let Some(m) = self.g.wire_next(y) {
                    if self.level_stale(m) {
                        dirty.insert(m);
                    }
                }
            }
        }
    }

    fn level_stale(&self, m: NodeId) -> bool {
        let node = self.g.node(m);
        let partner = node.partner.filter(|&p| self.assign[p] == self.assign[m]);
        let level = match partner {
            Some(p) => self.wire_in(m).max(self.wire_in(p)) + 1,
            None => self.wire_in(m) + 1,
        };
        level != self.level[m] || self.end_of(m, level) != self.end[m] || self.counted[m] != self.assign[m]
    }

    fn depth(&self, f: usize) -> u32 {
        self.ends[f].keys().next_back().copied().unwrap_or(0)
    }

    fn weight_bits(&self, e: EdgeId) -> u64 {
        self.edge_ln[e].to_bits()
    }

    fn bump_gate(&mut self, f: usize, bits: u64, d: i64) {
        self.log.push(Undo::GateCount(f, bits, d));
        let c = self.gate_counts[f].entry(bits).or_insert(0);
        *c += d;
        if *c == 0 {
            self.gate_counts[f].remove(&bits);
        }
    }

    fn bucket_mut(&mut self, pr: Pair) -> &mut BTreeSet<EdgeId> {
        if !self.buckets.contains_key(&pr) {
            self.log.push(Undo::Bucket(pr, None));
            self.buckets.insert(pr, BTreeSet::new());
            self.pairs_of[pr.0].insert(pr);
            self.pairs_of[pr.1].insert(pr);
        }
        self.buckets.get_mut(&pr).expect("just inserted")
    }

    fn insert_edge(&mut self, e: EdgeId) {
        let edge = self.g.edge(e);
        let (a, b) = (self.assign[edge.src], self.assign[edge.dst]);
        if a == b {
            return;
        }
        match edge.kind {
            EdgeKind::Gate => {
                let bits = self.weight_bits(e);
                self.bump_gate(a, bits, 1);
                self.bump_gate(b, bits, 1);
            }
            EdgeKind::Wire => {
                self.snapshot_bucket((a, b));
                self.bucket_mut((a, b)).insert(e);
            }
        }
    }

    fn remove_edge(&mut self, e: EdgeId) {
        let edge = self.g.edge(e);
        let (a, b) = (self.assign[edge.src], self.assign[edge.dst]);
        if a == b {
            return;
        }
        match edge.kind {
            EdgeKind::Gate => {
                let bits = self.weight_bits(e);
                self.bump_gate(a, bits, -1);
                self.bump_gate(b, bits, -1);
            }
            EdgeKind::Wire => {
                self.snapshot_bucket((a, b));
                let set = self.buckets.get_mut(&(a, b)).expect("crossing wire is bucketed");
                set.remove(&e);
            }
        }
    }

    fn snapshot_bucket(&mut self, pr: Pair) {
        if let Some(set) = self.buckets.get(&pr) {
            self.log.push(Undo::Bucket(pr, Some(set.clone())));
        }
    }

    fn regroup(&mut self, pr: Pair) {
        let edges: Vec<EdgeId> = self
            .buckets
            .get(&pr)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        let ln = if edges.is_empty() {
            None
        } else {
            let single: f64 = edges.iter().map(|&e| self.edge_ln[e]).sum();
            Some(match self.mode {
                GammaMode::Practical => single,
                GammaMode::Theoretical => classify_wire_bucket(self.g, &self.assign, pr, &edges)
                    .into_iter()
                    .map(|(class, members)| match class {
                        CutClass::Parallel => self.table.parallel_wire(members.len()).ln(),
                        _ => members.iter().map(|&k| self.edge_ln[edges[k]]).sum(),
                    })
                    .sum(),
            })
        };
        let old = match ln {
            Some(v) => self.pair_ln.insert(pr, v),
            None => self.pair_ln.remove(&pr),
        };
        self.log.push(Undo::PairLn(pr, old));
    }

    fn ln_product(&self, f: usize) -> f64 {
        let gates: f64 = self.gate_counts[f]
            .iter()
            .map(|(&b, &c)| c as f64 * f64::from_bits(b))
            .sum();
        let wires: f64 = self.pairs_of[f].iter().filter_map(|pr| self.pair_ln.get(pr)).sum();
        gates + wires
    }

    fn objective(&self) -> f64 {
        let terms: Vec<f64> = (0..self.size.len())
            .filter(|&f| self.size[f] > 0)
            .map(|f| self.ln_product(f) + (self.width[f] as f64).ln() + (self.depth(f) as f64).ln())
            .collect();
        let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
    }

    /// Applies the moves; returns false (state untouched) if a width limit
    /// would break.
    fn apply(&mut self, moves: &[(NodeId, usize)]) -> bool {
        self.log.clear();
        let mut touched_frags = BTreeSet::new();
        let mut dirty = BTreeSet::new();
        for &(n, to) in moves {
            let from = self.assign[n];
            if from == to {
                continue;
            }
            touched_frags.insert(from);
            touched_frags.insert(to);
            let edges: Vec<EdgeId> = self.g.incident_edges(n).map(|e| e.id).collect();
            for &e in &edges {
                self.remove_edge(e);
            }
            let mut wire_from = 0;
            let mut wire_to = 0;
            for m in [self.g.wire_prev(n), self.g.wire_next(n)].into_iter().flatten() {
                wire_from += usize::from(self.assign[m] == from);
                wire_to += usize::from(self.assign[m] == to);
                dirty.insert(m);
            }
            self.log.push(Undo::Assign(n, from));
            self.log.push(Undo::Size(from, self.size[from], self.width[from]));
            self.log.push(Undo::Size(to, self.size[to], self.width[to]));
            self.assign[n] = to;
            self.size[from] -= 1;
            self.width[from] = self.width[from] + wire_from - 1;
            self.size[to] += 1;
            self.width[to] = self.width[to] + 1 - wire_to;
            for &e in &edges {
                self.insert_edge(e);
            }
            dirty.insert(n);
            if let Some(p) = self.g.node(n).partner {
                dirty.insert(p);
            }
        }
        if touched_frags.iter().any(|&f| self.width[f] > self.q_con) {
            self.revert();
            return false;
        }
        self.propagate(dirty);
        let pairs: BTreeSet<Pair> = touched_frags
            .iter()
            .flat_map(|&f| self.pairs_of[f].iter().copied())
            .collect();
        for pr in pairs {
            self.regroup(pr);
        }
        true
    }

    fn revert(&mut self) {
        while let Some(u) = self.log.pop() {
            match u {
                Undo::Assign(n, f) => self.assign[n] = f,
                Undo::Level(n, level, end, counted) => {
                    multiset_remove(&mut self.ends[self.counted[n]], self.end[n]);
                    if counted != usize::MAX {
                        *self.ends[counted].entry(end).or_insert(0) += 1;
                    }
                    self.level[n] = level;
                    self.end[n] = end;
                    self.counted[n] = counted;
                }
                Undo::Size(f, size, width) => {
                    self.size[f] = size;
                    self.width[f] = width;
                }
                Undo::Bucket(pr, old) => match old {
                    Some(set) => {
                        self.buckets.insert(pr, set);
                    }
                    None => {
                        self.buckets.remove(&pr);
                        self.pairs_of[pr.0].remove(&pr);
                        self.pairs_of[pr.1].remove(&pr);
                    }
                },
                Undo::PairLn(pr, old) => match old {
                    Some(v) => {
                        self.pair_ln.insert(pr, v);
                    }
                    None => {
                        self.pair_ln.remove(&pr);
                    }
                },
                Undo::GateCount(f, bits, d) => {
                    let c = self.gate_counts[f].entry(bits).or_insert(0);
                    *c -= d;
                    if *c == 0 {
                        self.gate_counts[f].remove(&bits);
                    }
                }
            }
        }
    }

    /// Tries the moves; keeps them if ln QRO drops below `current`.
    fn attempt(&mut self, moves: &[(NodeId, usize)], current: &mut f64) -> bool {
        if !self.apply(moves) {
            return false;
        }
        let next = self.objective();
        if next < *current - IMPROVEMENT_EPS {
            *current = next;
            self.log.clear();
            true
        } else {
            self.revert();
            false
        }
    }
}

fn multiset_remove(m: &mut BTreeMap<u32, usize>, k: u32) {
    if let Some(c) = m.get_mut(&k) {
        *c -= 1;
        if *c == 0 {
            m.remove(&k);
        }
    }
}

/// Hill-climbs `p` under the QRO objective of `mode`. The result never has a
/// higher QRO than the input and keeps every width within `q_con`.
pub fn refine(p: &Partition, g: &CircuitGraph, q_con: usize, mode: GammaMode, max_passes: usize) -> Partition {
    if p.fragments.len() < 2 || p.max_width() > q_con {
        return p.clone();
    }
    let mut s = State::new(p, g, q_con, mode);
    let mut current = s.objective();
    for _ in 0..max_passes {
        let mut improved = false;
        for n in 0..g.len() {
            let here = s.assign[n];
            let targets: BTreeSet<usize> = g.neighbors(n).map(|m| s.assign[m]).filter(|&f| f != here).collect();
            for t in targets {
                if s.attempt(&[(n, t)], &mut current) {
                    improved = true;
                    break;
                }
            }
        }
        for n in 0..g.len() {
            for m in [g.wire_next(n), g.node(n).partner.filter(|&q| q > n)]
                .into_iter()
                .flatten()
            {
                let here = s.assign[n];
                if s.assign[m] != here {
                    continue;
                }
                let targets: BTreeSet<usize> = g
                    .neighbors(n)
                    .chain(g.neighbors(m))
                    .map(|x| s.assign[x])
                    .filter(|&f| f != here)
                    .collect();
                for t in targets {
                    if s.attempt(&[(n, t), (m, t)], &mut current) {
                        improved = true;
                        break;
                    }
                }
            }
        }
        for e in g.edges() {
            let (a, b) = (s.assign[e.src], s.assign[e.dst]);
            if a != b && s.attempt(&[(e.src, b), (e.dst, a)], &mut current) {
                improved = true;
            }
        }
        let k = s.size.len();
        for b in 0..k {
            let members: Vec<NodeId> = (0..g.len()).filter(|&n| s.assign[n] == b).collect();
            let targets: BTreeSet<usize> = members
                .iter()
                .flat_map(|&n| g.neighbors(n))
                .map(|m| s.assign[m])
                .filter(|&f| f != b)
                .collect();
            for a in targets {
                let moves: Vec<(NodeId, usize)> = members.iter().map(|&n| (n, a)).collect();
                if s.attempt(&moves, &mut current) {
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Partition::from_assignment(g, &s.assign)
}
