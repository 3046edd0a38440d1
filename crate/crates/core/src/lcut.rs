//! Minimum-capacity unions of `ell` arc-disjoint cuts, with the primal-dual
//! certificate, and their stable-matching applications.

use crate::assoc::AssocDigraph;
use crate::error::{Error, Result};
use crate::flow::{primal_dual, FlowNetwork};
use crate::optimize::{cost_of, pack_h_independent};
use crate::prefs::{reduce_to_core, CoreSystem, Edge, EdgeId, Matching, PreferenceSystem};
use crate::ringset::{NodeSet, RingCode};
use crate::scalar::{from_usize, Capacity, Weight};

/// A chain of shores `Z_1 < ... < Z_ell` whose cuts are arc-disjoint, with
/// the flow and potential proving its capacity minimum.
#[derive(Clone, Debug)]
pub struct LCutCertificate<T> {
    /// The network the certificate refers to.
    pub network: FlowNetwork<T>,
    pub ell: usize,
    pub shores: Vec<NodeSet>,
    /// Arcs leaving some shore.
    pub cut_arcs: Vec<usize>,
    pub capacity: T,
    /// A flow that may exceed the capacities.
    pub flow: Vec<T>,
    pub potential: Vec<T>,
    pub amount: T,
    /// Total excess of the flow over the capacities.
    pub surplus: T,
    /// `ell * amount - surplus`.
    pub dual: T,
}

impl<T: Weight> LCutCertificate<T> {
    /// Checks the shores, the flow, the optimality conditions and that the
    /// capacity equals the dual value.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let net = &self.network;
        let (s, t) = (net.source(), net.sink());
        if self.shores.len() != self.ell {
            return Err("wrong number of shores".into());
        }
        for (i, z) in self.shores.iter().enumerate() {
            if !z.contains(s) || z.contains(t) {
                return Err(format!("shore {} does not separate source and sink", i + 1));
            }
            if i > 0 && !self.shores[i - 1].is_subset(z) {
                return Err("shores do not form a chain".into());
            }
        }
        if self.flow.len() != net.arcs().len() || self.flow.iter().any(|&f| f < T::zero()) {
            return Err("flow has the wrong shape or a negative value".into());
        }
        for v in 0..net.node_count() {
            if v != s && v != t && net.net_outflow(&self.flow, v) != T::zero() {
                return Err(format!("flow is not conserved at node {v}"));
            }
        }
        let mut capacity = T::zero();
        let mut surplus = T::zero();
        let mut cut = Vec::new();
        for (i, a) in net.arcs().iter().enumerate() {
            let left = self.shores.iter().filter(|z| net.leaves(i, z)).count();
            let entered = self.shores.iter().any(|z| z.contains(a.head) && !z.contains(a.tail));
            if left > 1 {
                return Err(format!("arc {i} leaves {left} shores"));
            }
            let z = self.flow[i];
            if left == 1 {
                cut.push(i);
                match a.cap {
                    Capacity::Infinite => return Err(format!("arc {i} in the cut has infinite capacity")),
                    Capacity::Finite(g) => capacity = capacity + g,
                }
            }
            if let Capacity::Finite(g) = a.cap {
                if z > g {
                    surplus = surplus + (z - g);
                    if left == 0 {
                        return Err(format!("arc {i} carries excess flow outside the cut"));
                    }
                }
                if z < g && left == 1 {
                    return Err(format!("cut arc {i} is not saturated"));
                }
            }
            if z > T::zero() && entered {
                return Err(format!("arc {i} carries flow into a shore"));
            }
        }
        if cut != self.cut_arcs || capacity != self.capacity || surplus != self.surplus {
            return Err("recorded cut, capacity or surplus is inconsistent".into());
        }
        let amount = net.net_outflow(&self.flow, s);
        let dual = from_usize::<T>(self.ell) * amount - surplus;
        if amount != self.amount || dual != self.dual || dual != capacity {
            return Err(format!("capacity {capacity} differs from dual value {dual}"));
        }
        Ok(())
    }
}

/// Minimum `ell`-cut of `net`: every finite arc gets an infinite parallel
/// copy of cost one, and the (0,1)-cost primal-dual runs until the sink
/// potential reaches `ell`. Shores are the potential level sets.
pub fn min_lcut<T: Weight>(net: &FlowNetwork<T>, ell: usize) -> Result<LCutCertificate<T>> {
    if ell == 0 {
        return Err(Error::InvalidInput("ell must be positive".into()));
    }
    let (s, t) = (net.source(), net.sink());
    if net.arcs().iter().any(|a| a.head == s || a.tail == t) {
        return Err(Error::InvalidInput("arcs may not enter the source or leave the sink".into()));
    }
    let m = net.arcs().len();
    let mut doubled = FlowNetwork::new(net.node_count(), s, t);
    let mut copy_of = vec![None; m];
    for a in net.arcs() {
        doubled.add_arc(a.tail, a.head, a.cap, T::zero());
    }
    for (i, a) in net.arcs().iter().enumerate() {
        if a.cap.is_finite() {
            copy_of[i] = Some(doubled.add_arc(a.tail, a.head, Capacity::Infinite, T::one()));
        }
    }
    let run = primal_dual(&doubled, ell, false)?;
    let mut z1 = run.flow;
    // Flow on a copy implies its original is saturated; shift flow onto the
    // original where that fails (the sum per arc pair is unchanged).
    for i in 0..m {
        if let (Some(j), Capacity::Finite(g)) = (copy_of[i], net.arc(i).cap) {
            let moved = z1[j].min(g - z1[i]).max(T::zero());
            z1[i] = z1[i] + moved;
            z1[j] = z1[j] - moved;
        }
    }
    let flow: Vec<T> = (0..m).map(|i| z1[i] + copy_of[i].map_or(T::zero(), |j| z1[j])).collect();
    let pot = run.potential;
    let shores: Vec<NodeSet> = (0..ell)
        .map(|i| {
            let level: T = from_usize(i);
            let mut z = NodeSet::with_capacity(net.node_count());
            (0..net.node_count()).filter(|&v| pot[v] <= level).for_each(|v| z.insert(v));
            z
        })
        .collect();
    let cut_arcs: Vec<usize> = (0..m).filter(|&i| shores.iter().any(|z| net.leaves(i, z))).collect();
    let mut capacity = T::zero();
    for &i in &cut_arcs {
        let g = net.arc(i).cap.finite().ok_or(Error::Unbounded)?;
        capacity = capacity.checked_add(&g).ok_or(Error::Overflow)?;
    }
    let surplus: T = (0..m)
        .filter_map(|i| net.arc(i).cap.finite().map(|g| (flow[i] - g).max(T::zero())))
        .sum();
    let amount = net.net_outflow(&flow, s);
    let dual = from_usize::<T>(ell) * amount - surplus;
    Ok(LCutCertificate { network: net.clone(), ell, shores, cut_arcs, capacity, flow, potential: pot, amount, surplus, dual })
}

/// Minimum `ell`-cut whose shores are members of `ring`: the ring's
/// generators join the network as infinite arcs.
pub fn min_lcut_in_ring<T: Weight>(net: &FlowNetwork<T>, ring: &RingCode, ell: usize) -> Result<LCutCertificate<T>> {
    let mut plus = net.clone();
    for &(u, v) in ring.generators() {
        plus.add_arc(u, v, Capacity::Infinite, T::zero());
    }
    let cert = min_lcut(&plus, ell)?;
    debug_assert!(cert.shores.iter().all(|z| ring.is_member(z)));
    Ok(cert)
}

#[derive(Clone, Debug)]
pub struct DisjointFamily<T> {
    pub matchings: Vec<Matching>,
    pub total_cost: T,
    pub certificate: LCutCertificate<T>,
}

/// `ell` pairwise disjoint stable matchings of minimum total cost.
pub fn disjoint_stable_matchings_min_total_cost<T: Weight>(
    core: &CoreSystem,
    d: &AssocDigraph,
    ell: usize,
    c: &[T],
) -> Result<DisjointFamily<T>> {
    if c.len() != core.system().edge_count() {
        return Err(Error::InvalidInput("one cost per edge is required".into()));
    }
    let ones = vec![T::one(); core.system().edge_count()];
    let packing = pack_h_independent(core, d, &ones, None)?;
    let available = packing.value.to_usize().unwrap_or(usize::MAX);
    if available < ell {
        return Err(Error::InsufficientDisjoint {
            requested: ell,
            available,
            blocker: packing.blocker.iter().map(|e| e.0).collect(),
        });
    }
    let low = core.stable_edges().iter().map(|e| c[e.0]).min().unwrap_or(T::zero());
    let empty = RingCode::full(d.node_count(), d.source(), d.sink());
    let net = d.network(&empty, |e| Capacity::Finite(c[e.0] - low));
    let certificate = min_lcut_in_ring(&net, d.ring(), ell)?;
    let matchings: Vec<Matching> = certificate.shores.iter().map(|z| d.matching_unchecked(z)).collect();
    let total_cost = matchings.iter().map(|m| cost_of(c, m)).sum();
    Ok(DisjointFamily { matchings, total_cost, certificate })
}

#[derive(Clone, Debug)]
pub struct UnionFamily<T> {
    pub matchings: Vec<Matching>,
    pub weight: T,
    /// Optimality proof for the disjoint family on the enlarged system.
    pub certificate: LCutCertificate<T>,
}

/// `ell` stable matchings whose union has maximum weight. Each stable edge
/// gets `ell - 1` parallel copies, girl-worse and boy-better than it, and
/// the disjoint-family problem is solved on the enlarged system.
pub fn max_weight_union<T: Weight>(core: &CoreSystem, ell: usize, w: &[T]) -> Result<UnionFamily<T>> {
    let system = core.system();
    if ell == 0 || w.len() != system.edge_count() {
        return Err(Error::InvalidInput("ell must be positive and w given per edge".into()));
    }
    if w.iter().any(|&v| v < T::zero()) {
        return Err(Error::InvalidInput("weights must be nonnegative".into()));
    }
    let mut edges: Vec<Edge> = system.edges().to_vec();
    let mut origin: Vec<EdgeId> = system.edge_ids().collect();
    let mut copies: Vec<Vec<EdgeId>> = vec![Vec::new(); system.edge_count()];
    for &e in core.stable_edges() {
        for k in 1..ell {
            let edge = system.edge(e);
            copies[e.0].push(EdgeId(edges.len()));
            origin.push(e);
            edges.push(Edge { name: format!("{}~{k}", edge.name), boy: edge.boy, girl: edge.girl });
        }
    }
    let boy_prefs = (0..system.boys().len())
        .map(|u| {
            system
                .boy_prefs(u)
                .iter()
                .flat_map(|&e| copies[e.0].iter().rev().copied().chain([e]))
                .collect()
        })
        .collect();
    let girl_prefs = (0..system.girls().len())
        .map(|g| {
            system
                .girl_prefs(g)
                .iter()
                .flat_map(|&e| std::iter::once(e).chain(copies[e.0].iter().copied()))
                .collect()
        })
        .collect();
    let enlarged = PreferenceSystem::new(system.boys().to_vec(), system.girls().to_vec(), edges, boy_prefs, girl_prefs)?;
    let core2 = reduce_to_core(&enlarged);
    let d2 = AssocDigraph::new(&core2);

    let scale: T = from_usize(core.stable_edges().len() + 1);
    let mut boosted = vec![T::zero(); core2.system().edge_count()];
    for e2 in core2.system().edge_ids() {
        let input = core2.input_edge(e2);
        if input.0 < system.edge_count() && core.is_stable_edge(input) {
            boosted[e2.0] = w[input.0]
                .checked_mul(&scale)
                .and_then(|v| v.checked_add(&T::one()))
                .ok_or(Error::Overflow)?;
        }
    }
    let top = boosted.iter().copied().max().unwrap_or(T::zero());
    let c: Vec<T> = boosted.iter().map(|&v| top - v).collect();
    let family = disjoint_stable_matchings_min_total_cost(&core2, &d2, ell, &c)?;
    let matchings: Vec<Matching> = family
        .matchings
        .iter()
        .map(|m| m.iter().map(|e2| origin[core2.input_edge(e2).0]).collect())
        .collect();
    let union: Matching = matchings.iter().flat_map(|m| m.iter()).collect();
    Ok(UnionFamily { weight: union.iter().map(|e| w[e.0]).sum(), matchings, certificate: family.certificate })
}
