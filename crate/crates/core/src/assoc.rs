//! The digraph whose ring of source-side sets is isomorphic to the lattice
//! of stable matchings.
//!
//! Every girl `w` contributes a path from the source to the sink whose arcs
//! are her stable edges, best first; the paths share only their endpoints.
//! `L(M)` is the set of nodes preceding the arcs of `M`. For each stable edge
//! `e` with tail `t_e`, dummy arcs join `t_e` to every node of `L(M_e)`.
//! Nontrivial members of the resulting ring are exactly the sets `L(M)`.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::prefs::{CoreSystem, EdgeId, Matching};
use crate::ringset::{NodeSet, RingCode};
use crate::scalar::{Capacity, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeLabel {
    Source,
    Sink,
    /// The node after the first `rank` stable edges on the path of `girl`.
    Inner { girl: usize, rank: usize },
}

#[derive(Clone, Debug)]
pub struct AssocDigraph {
    labels: Vec<NodeLabel>,
    /// Stable arcs in path order: girl by girl, best edge first.
    stable_arcs: Vec<(EdgeId, usize, usize)>,
    arc_of_edge: Vec<Option<usize>>,
    girl_paths: Vec<Vec<EdgeId>>,
    dummy: Vec<FixedBitSet>,
    ring: RingCode,
}

impl AssocDigraph {
    pub fn new(core: &CoreSystem) -> Self {
        let system = core.system();
        let mut girl_paths: Vec<Vec<EdgeId>> = (0..core.n())
            .map(|w| system.girl_prefs(w).iter().copied().filter(|&e| core.is_stable_edge(e)).collect())
            .collect();
        girl_paths.iter_mut().for_each(|p| p.shrink_to_fit());
        let mut labels = vec![NodeLabel::Source];
        let mut path_nodes: Vec<Vec<usize>> = Vec::with_capacity(core.n());
        for (w, path) in girl_paths.iter().enumerate() {
            let mut nodes = vec![0];
            for rank in 1..path.len() {
                nodes.push(labels.len());
                labels.push(NodeLabel::Inner { girl: w, rank });
            }
            path_nodes.push(nodes);
        }
        let sink = labels.len();
        labels.push(NodeLabel::Sink);
        let n = labels.len();
        for nodes in &mut path_nodes {
            nodes.push(sink);
        }

        let mut stable_arcs = Vec::new();
        let mut arc_of_edge = vec![None; system.edge_count()];
        for (w, path) in girl_paths.iter().enumerate() {
            for (j, &e) in path.iter().enumerate() {
                arc_of_edge[e.0] = Some(stable_arcs.len());
                stable_arcs.push((e, path_nodes[w][j], path_nodes[w][j + 1]));
            }
        }

        let mut dummy = vec![FixedBitSet::with_capacity(n); n];
        let mut generators = Vec::new();
        for &(e, tail, _) in &stable_arcs {
            let me = core.girl_best_with(e).expect("stable edge has M_e");
            for f in me.iter() {
                let (_, f_tail, _) = stable_arcs[arc_of_edge[f.0].expect("M_e is stable")];
                generators.push((tail, f_tail));
                let girl = system.edge(f).girl;
                let pos = system.girl_prefs(girl).iter().filter(|&&g| core.is_stable_edge(g)).position(|g| *g == f);
                for &v in &path_nodes[girl][..=pos.expect("f is on its girl's path")] {
                    if v != tail {
                        dummy[tail].insert(v);
                    }
                }
            }
        }
        for nodes in &path_nodes {
            for j in 1..nodes.len() - 1 {
                generators.push((nodes[j], nodes[j - 1]));
            }
        }
        let ring = RingCode::from_generators(n, 0, sink, generators);
        AssocDigraph { labels, stable_arcs, arc_of_edge, girl_paths, dummy, ring }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn label(&self, v: usize) -> NodeLabel {
        self.labels[v]
    }

    /// Stable arcs `(edge, tail, head)` in path order.
    pub fn stable_arcs(&self) -> &[(EdgeId, usize, usize)] {
        &self.stable_arcs
    }

    /// The stable arc of `e`, as `(tail, head)`.
    pub fn arc_of(&self, e: EdgeId) -> Option<(usize, usize)> {
        let i = (*self.arc_of_edge.get(e.0)?)?;
        let (_, t, h) = self.stable_arcs[i];
        Some((t, h))
    }

    pub fn girl_paths(&self) -> &[Vec<EdgeId>] {
        &self.girl_paths
    }

    pub fn dummy_arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dummy.iter().enumerate().flat_map(|(u, heads)| heads.ones().map(move |v| (u, v)))
    }

    pub fn dummy_heads(&self, tail: usize) -> &FixedBitSet {
        &self.dummy[tail]
    }

    /// The ring `R_D` of sets no dummy arc leaves.
    pub fn ring(&self) -> &RingCode {
        &self.ring
    }

    /// `L(M)` for a stable matching `M` of `core`.
    pub fn shore_of(&self, core: &CoreSystem, m: &Matching) -> Result<NodeSet> {
        if !core.is_stable(m)? {
            return Err(Error::NotStable);
        }
        Ok(self.shore_unchecked(m))
    }

    pub(crate) fn shore_unchecked(&self, m: &Matching) -> NodeSet {
        let mut z = FixedBitSet::with_capacity(self.node_count());
        z.insert(0);
        for e in m.iter() {
            let i = self.arc_of_edge[e.0].expect("edge of a stable matching is stable");
            // Arcs of one girl are consecutive, so walk back along her path.
            let mut k = i;
            loop {
                let (_, tail, _) = self.stable_arcs[k];
                z.insert(tail);
                if tail == 0 {
                    break;
                }
                k -= 1;
            }
        }
        z
    }

    /// The stable matching formed by the arcs leaving a nontrivial member.
    pub fn matching_of(&self, z: &NodeSet) -> Result<Matching> {
        if !self.ring.is_proper_member(z) {
            return Err(Error::NotRingMember);
        }
        Ok(self.matching_unchecked(z))
    }

    pub(crate) fn matching_unchecked(&self, z: &NodeSet) -> Matching {
        self.stable_arcs
            .iter()
            .filter(|&&(_, t, h)| z.contains(t) && !z.contains(h))
            .map(|&(e, _, _)| e)
            .collect()
    }

    /// Network on the stable arcs with capacities `cap(e)` and the ring's
    /// generators as infinite arcs. Arc `i < stable_arcs().len()` is stable
    /// arc `i`; every cost is zero.
    pub fn network<T: Weight>(&self, ring: &RingCode, cap: impl Fn(EdgeId) -> Capacity<T>) -> FlowNetwork<T> {
        let mut net = FlowNetwork::new(self.node_count(), self.source(), self.sink());
        for &(e, t, h) in &self.stable_arcs {
            net.add_arc(t, h, cap(e), T::zero());
        }
        for &(u, v) in ring.generators() {
            net.add_arc(u, v, Capacity::Infinite, T::zero());
        }
        net
    }

    /// Debug rendering: one `node` line per node, one `arc` line per arc.
    pub fn to_text(&self, core: &CoreSystem) -> String {
        let system = core.system();
        let name = |v: usize| match self.labels[v] {
            NodeLabel::Source => "s*".to_string(),
            NodeLabel::Sink => "t*".to_string(),
            NodeLabel::Inner { girl, rank } => format!("{}:{}", system.girls()[girl], rank),
        };
        let mut out = String::new();
        for v in 0..self.node_count() {
            let _ = writeln!(out, "node {}", name(v));
        }
        for &(e, t, h) in &self.stable_arcs {
            let _ = writeln!(out, "arc {} {} stable {}", name(t), name(h), system.edge_name(e));
        }
        for (t, h) in self.dummy_arcs() {
            let _ = writeln!(out, "arc {} {} dummy", name(t), name(h));
        }
        out
    }
}
