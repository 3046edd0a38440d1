//! Compact codes for rings of node sets.
//!
//! A ring family over `0..n` with distinguished `source` and `sink` is given
//! by its code: `C(u)` is the smallest member containing `u`, and a set is a
//! member iff no code arc `(u, v)`, `v` in `C(u)`, leaves it. Nontrivial
//! members contain the source and avoid the sink; `C(sink)` is everything.
//!
//! A code is stored through any generating arc set whose reachability
//! closure yields `C`. Generators suffice wherever the code arcs are used as
//! infinite-capacity or zero-cost arcs.

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

pub type NodeSet = FixedBitSet;

#[derive(Clone, Debug)]
pub struct RingCode {
    n: usize,
    source: usize,
    sink: usize,
    generators: Vec<(usize, usize)>,
    closure: Vec<FixedBitSet>,
}

impl RingCode {
    /// The ring generated by `arcs`, together with the arcs `u -> source`
    /// and `sink -> u` implied by the conventions above.
    pub fn from_generators(
        n: usize,
        source: usize,
        sink: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Self {
        assert!(source < n && sink < n && source != sink);
        let mut generators: Vec<(usize, usize)> = arcs
            .into_iter()
            .filter(|&(u, v)| u != v && v != source && u != sink)
            .collect();
        generators.sort_unstable();
        generators.dedup();
        let closure = close(n, source, sink, &generators);
        RingCode { n, source, sink, generators, closure }
    }

    /// The ring of all sets containing the source and avoiding the sink.
    pub fn full(n: usize, source: usize, sink: usize) -> Self {
        RingCode::from_generators(n, source, sink, std::iter::empty())
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    /// `C(u)`, the smallest member containing `u`.
    pub fn code(&self, u: usize) -> &FixedBitSet {
        &self.closure[u]
    }

    /// Generating arcs, excluding arcs into the source and out of the sink.
    /// These are the arcs to add with infinite capacity to an s-t network.
    pub fn generators(&self) -> &[(usize, usize)] {
        &self.generators
    }

    /// Generating arcs including the conventional arcs out of the sink.
    pub fn generators_with_sink_arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let sink = self.sink;
        self.generators
            .iter()
            .copied()
            .chain((0..self.n).filter(move |&u| u != sink).map(move |u| (sink, u)))
    }

    /// All code arcs `(u, v)` with `v` in `C(u) - u`.
    pub fn code_arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.closure[u].ones().filter(move |&v| v != u).map(move |v| (u, v)))
            .collect()
    }

    pub fn empty_set(&self) -> NodeSet {
        FixedBitSet::with_capacity(self.n)
    }

    pub fn is_member(&self, z: &NodeSet) -> bool {
        let count = z.count_ones(..);
        if count == 0 || count == self.n {
            return true;
        }
        z.contains(self.source) && !z.contains(self.sink) && z.ones().all(|u| self.closure[u].is_subset(z))
    }

    /// Nontrivial member: contains the source, avoids the sink.
    pub fn is_proper_member(&self, z: &NodeSet) -> bool {
        z.contains(self.source) && !z.contains(self.sink) && self.is_member(z)
    }

    /// True iff some member contains the source and avoids the sink.
    pub fn is_nontrivial(&self) -> bool {
        !self.closure[self.source].contains(self.sink)
    }

    /// The smallest member containing `seed`, unless that member is the
    /// whole ground set.
    pub fn smallest_member_containing(&self, seed: &NodeSet) -> Option<NodeSet> {
        let mut out = FixedBitSet::with_capacity(self.n);
        for u in seed.ones() {
            out.union_with(&self.closure[u]);
        }
        if out.contains(self.sink) {
            None
        } else {
            Some(out)
        }
    }
}

fn close(n: usize, source: usize, sink: usize, generators: &[(usize, usize)]) -> Vec<FixedBitSet> {
    let mut graph: DiGraph<(), ()> = DiGraph::with_capacity(n, generators.len() + 2 * n);
    for _ in 0..n {
        graph.add_node(());
    }
    for &(u, v) in generators {
        graph.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    for u in 0..n {
        if u != source {
            graph.add_edge(NodeIndex::new(u), NodeIndex::new(source), ());
        }
        if u != sink {
            graph.add_edge(NodeIndex::new(sink), NodeIndex::new(u), ());
        }
    }
    // tarjan_scc lists components in reverse topological order, so every
    // successor component is finished before its predecessors.
    let sccs = tarjan_scc(&graph);
    let mut comp_of = vec![0usize; n];
    for (c, comp) in sccs.iter().enumerate() {
        for v in comp {
            comp_of[v.index()] = c;
        }
    }
    let mut comp_closure: Vec<FixedBitSet> = Vec::with_capacity(sccs.len());
    for (c, comp) in sccs.iter().enumerate() {
        let mut set = FixedBitSet::with_capacity(n);
        for v in comp {
            set.insert(v.index());
        }
        for v in comp {
            for w in graph.neighbors(*v) {
                let d = comp_of[w.index()];
                if d != c {
                    let (done, _) = comp_closure.split_at(c);
                    set.union_with(&done[d]);
                }
            }
        }
        comp_closure.push(set);
    }
    (0..n).map(|u| comp_closure[comp_of[u]].clone()).collect()
}
