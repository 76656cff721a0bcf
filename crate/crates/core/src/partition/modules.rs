//! Initial modules by lockstep edge growth.
//!
//! The meta node with the most unvisited instances seeds one subgraph per
//! instance. All instances grow together: instance 0 proposes a frontier
//! node, and every other instance must take an unclaimed frontier node with
//! the same label so that the extended subgraphs keep one WL hash and every
//! width stays within the qubit constraint. Growth stops at the first
//! proposal no instance set can follow. A lone seed grows into a greedy
//! connected chunk instead.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use rayon::prelude::*;

use super::merge::Supernode;
use super::wl::{label_colors, wl_hash_with};
use super::PartitionError;
use crate::fold::{node_labels, MetaGraph, NodeLabel};
use crate::graph::{CircuitGraph, NodeId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleBucket {
    pub hash: u64,
    /// Indices into `InitialPartition::subgraphs`.
    pub instances: Vec<usize>,
    /// Node count of each instance.
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialPartition {
    /// Node sets, each sorted ascending; together they partition the graph.
    pub subgraphs: Vec<Vec<NodeId>>,
    pub widths: Vec<usize>,
    pub buckets: Vec<ModuleBucket>,
}

impl InitialPartition {
    /// Bucket with the most instances, then the largest subgraph.
    pub fn best(&self) -> Option<&ModuleBucket> {
        self.buckets
            .iter()
            .enumerate()
            .max_by_key(|(i, b)| (b.instances.len(), b.size, Reverse(*i)))
            .map(|(_, b)| b)
    }

    pub fn supernodes(&self) -> Vec<Supernode> {
        self.subgraphs
            .iter()
            .zip(&self.widths)
            .map(|(nodes, &width)| Supernode {
                nodes: nodes.clone(),
                width,
            })
            .collect()
    }
}

struct Grower<'a> {
    g: &'a CircuitGraph,
    labels: Vec<NodeLabel>,
    colors: Vec<u64>,
    visited: Vec<bool>,
    q_con: usize,
    iterations: usize,
}

#[derive(Clone)]
struct Instance {
    nodes: Vec<NodeId>,
    width: usize,
    frontier: BTreeSet<NodeId>,
}

impl Grower<'_> {
    fn width_with(&self, inst: &Instance, n: NodeId) -> usize {
        let joined = [self.g.wire_prev(n), self.g.wire_next(n)]
            .into_iter()
            .flatten()
            .filter(|m| inst.nodes.contains(m))
            .count();
        inst.width + 1 - joined
    }

    fn hash_with(&self, inst: &Instance, n: NodeId) -> u64 {
        let mut nodes = inst.nodes.clone();
        nodes.push(n);
        wl_hash_with(self.g, &nodes, |m| self.colors[m], self.iterations)
    }

    fn candidates<'b>(&'b self, inst: &'b Instance) -> impl Iterator<Item = NodeId> + 'b {
        inst.frontier.iter().copied().filter(|&n| !self.visited[n])
    }

    fn seed(&mut self, n: NodeId) -> Instance {
        let mut inst = Instance {
            nodes: Vec::new(),
            width: 0,
            frontier: BTreeSet::new(),
        };
        self.add(&mut inst, n);
        inst
    }

    fn add(&mut self, inst: &mut Instance, n: NodeId) {
        inst.width = self.width_with(inst, n);
        inst.nodes.push(n);
        inst.frontier.remove(&n);
        self.visited[n] = true;
        for m in self.g.neighbors(n) {
            if !self.visited[m] {
                inst.frontier.insert(m);
            }
        }
    }

    fn grow_alone(&mut self, inst: &mut Instance) {
        loop {
            let next = self.candidates(inst).find(|&n| self.width_with(inst, n) <= self.q_con);
            match next {
                Some(n) => self.add(inst, n),
                None => break,
            }
        }
    }

    fn grow_lockstep(&mut self, insts: &mut [Instance]) {
        loop {
            let proposals: Vec<NodeId> = self.candidates(&insts[0]).collect();
            let mut step = None;
            for c0 in proposals {
                if self.width_with(&insts[0], c0) > self.q_con {
                    continue;
                }
                let target = self.hash_with(&insts[0], c0);
                let label = &self.labels[c0];
                let options: Vec<Vec<NodeId>> = insts[1..]
                    .par_iter()
                    .map(|inst| {
                        self.candidates(inst)
                            .filter(|&c| {
                                c != c0
                                    && &self.labels[c] == label
                                    && self.width_with(inst, c) <= self.q_con
                                    && self.hash_with(inst, c) == target
                            })
                            .collect()
                    })
                    .collect();
                let mut chosen = vec![c0];
                for opts in &options {
                    match opts.iter().find(|c| !chosen.contains(c)) {
                        Some(&c) => chosen.push(c),
                        None => break,
                    }
                }
                if chosen.len() == insts.len() {
                    step = Some(chosen);
                    break;
                }
            }
            let Some(chosen) = step else { break };
            for (inst, n) in insts.iter_mut().zip(chosen) {
                self.add(inst, n);
            }
        }
    }
}

pub fn module_finding(
    g: &CircuitGraph,
    mg: &MetaGraph,
    q_con: usize,
    iterations: usize,
) -> Result<InitialPartition, PartitionError> {
    if q_con < 2 {
        return Err(PartitionError::ConstraintTooSmall(q_con));
    }
    let mut gr = Grower {
        g,
        labels: node_labels(g),
        colors: label_colors(g),
        visited: vec![false; g.len()],
        q_con,
        iterations,
    };
    let mut remaining: Vec<usize> = mg.meta_nodes.iter().map(|m| m.fold_weight).collect();
    let mut heap: BinaryHeap<(usize, Reverse<NodeId>, usize)> = mg
        .meta_nodes
        .iter()
        .map(|m| (m.fold_weight, Reverse(m.representative), m.id))
        .collect();

    let mut out = InitialPartition {
        subgraphs: Vec::new(),
        widths: Vec::new(),
        buckets: Vec::new(),
    };
    let mut bucket_of: HashMap<u64, usize> = HashMap::new();

    while let Some((count, rep, meta)) = heap.pop() {
        if remaining[meta] == 0 {
            continue;
        }
        if count != remaining[meta] {
            heap.push((remaining[meta], rep, meta));
            continue;
        }
        let seeds: Vec<NodeId> = mg.meta_nodes[meta]
            .folded_nodes
            .iter()
            .copied()
            .filter(|&n| !gr.visited[n])
            .collect();
        let mut insts: Vec<Instance> = seeds.iter().map(|&n| gr.seed(n)).collect();
        if insts.len() == 1 {
            gr.grow_alone(&mut insts[0]);
        } else {
            gr.grow_lockstep(&mut insts);
        }
        for inst in &insts {
            for &n in &inst.nodes {
                remaining[mg.meta_of(n)] -= 1;
            }
        }
        let hash = wl_hash_with(g, &insts[0].nodes, |m| gr.colors[m], iterations);
        let size = insts[0].nodes.len();
        let same_shape = insts.iter().all(|i| i.nodes.len() == size);
        for inst in insts {
            let mut nodes = inst.nodes;
            nodes.sort_unstable();
            let idx = out.subgraphs.len();
            let key = if same_shape {
                hash
            } else {
                wl_hash_with(g, &nodes, |m| gr.colors[m], iterations)
            };
            let b = *bucket_of.entry(key).or_insert_with(|| {
                out.buckets.push(ModuleBucket {
                    hash: key,
                    instances: Vec::new(),
                    size: nodes.len(),
                });
                out.buckets.len() - 1
            });
            out.buckets[b].instances.push(idx);
            out.subgraphs.push(nodes);
            out.widths.push(inst.width);
        }
    }
    Ok(out)
}
