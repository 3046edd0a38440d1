//! Cheapest stable matchings (single, lexicographic and constrained) and
//! packings of stable matchings against minimum blockers.

use std::collections::VecDeque;

use crate::assoc::AssocDigraph;
use crate::error::{Error, Result};
use crate::flow::{max_flow, shortest_paths, FlowNetwork};
use crate::prefs::{CoreSystem, EdgeId, Matching};
use crate::ringset::{NodeSet, RingCode};
use crate::scalar::{from_usize, Capacity, Weight};

/// Total of `c` over `m`.
pub fn cost_of<T: Weight>(c: &[T], m: &Matching) -> T {
    m.iter().map(|e| c[e.0]).sum()
}

fn check_len<T>(core: &CoreSystem, c: &[T]) -> Result<()> {
    if c.len() == core.system().edge_count() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "expected {} edge values, got {}",
            core.system().edge_count(),
            c.len()
        )))
    }
}

/// Stable-arc capacities `c - min c`, nonnegative on the stable edges.
fn shifted<T: Weight>(core: &CoreSystem, c: &[T]) -> Result<Vec<T>> {
    check_len(core, c)?;
    let low = core.stable_edges().iter().map(|e| c[e.0]).min().unwrap_or(T::zero());
    c.iter()
        .map(|&v| v.checked_sub(&low).ok_or(Error::Overflow))
        .collect()
}

/// Refines `ring` to the members minimizing the cut capacity in `net`
/// (extended by the ring's generators as infinite arcs). Returns the ring
/// unchanged with `None` when every member has infinite capacity.
pub fn minimizer_ring<T: Weight>(ring: &RingCode, net: &FlowNetwork<T>) -> Result<(RingCode, Option<T>)> {
    let mut full = net.clone();
    for &(u, v) in ring.generators() {
        full.add_arc(u, v, Capacity::Infinite, T::zero());
    }
    match max_flow(&full) {
        Err(Error::Unbounded) => Ok((ring.clone(), None)),
        Err(e) => Err(e),
        Ok(mf) => {
            let refined =
                RingCode::from_generators(ring.node_count(), ring.source(), ring.sink(), mf.residual_arcs());
            Ok((refined, Some(mf.value)))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cheapest<T> {
    pub matching: Matching,
    pub cost: T,
    /// `L(M)`, the smallest minimum cut.
    pub shore: NodeSet,
    /// Maximum flow value, equal to the cost of the matching after
    /// shifting all stable-edge costs so that the cheapest is zero.
    pub flow_value: T,
}

/// The girl-best stable matching of minimum total cost.
pub fn cheapest_stable_matching<T: Weight>(core: &CoreSystem, d: &AssocDigraph, c: &[T]) -> Result<Cheapest<T>> {
    let g = shifted(core, c)?;
    let net = d.network(d.ring(), |e| Capacity::Finite(g[e.0]));
    let mf = max_flow(&net)?;
    let matching = d.matching_unchecked(&mf.min_cut);
    Ok(Cheapest { cost: cost_of(c, &matching), matching, shore: mf.min_cut, flow_value: mf.value })
}

#[derive(Clone, Debug)]
pub struct MultiCost<T> {
    pub matching: Matching,
    pub values: Vec<T>,
    /// Members of this ring are the shores of the lexicographic minimizers.
    pub ring: RingCode,
}

/// The girl-best stable matching minimizing `costs[0]`, then `costs[1]`
/// among those, and so on.
pub fn multi_cost_stable_matching<T: Weight>(
    core: &CoreSystem,
    d: &AssocDigraph,
    costs: &[&[T]],
) -> Result<MultiCost<T>> {
    let mut ring = d.ring().clone();
    for c in costs {
        let g = shifted(core, c)?;
        let net = d.network(&RingCode::full(d.node_count(), d.source(), d.sink()), |e| Capacity::Finite(g[e.0]));
        ring = minimizer_ring(&ring, &net)?.0;
    }
    let shore = ring.code(d.source()).clone();
    let matching = d.matching_of(&shore)?;
    let values = costs.iter().map(|c| cost_of(c, &matching)).collect();
    Ok(MultiCost { matching, values, ring })
}

/// The girl-best among the `c`-cheapest stable matchings containing
/// `forced` and avoiding `forbidden` (all of them when `c` is `None`).
pub fn constrained_stable_matching<T: Weight>(
    core: &CoreSystem,
    d: &AssocDigraph,
    forced: &[EdgeId],
    forbidden: &[EdgeId],
    c: Option<&[T]>,
) -> Result<Matching> {
    let forced_set: Matching = forced.iter().copied().collect();
    core.system().check_matching(&forced_set)?;
    if let Some(e) = forbidden.iter().find(|e| forced_set.contains(**e) || e.0 >= core.system().edge_count()) {
        return Err(Error::InvalidInput(format!("edge {e} is both forced and forbidden, or unknown")));
    }
    if forced.iter().any(|&e| !core.is_stable_edge(e)) {
        return Err(Error::Infeasible);
    }
    let n = core.n();
    let mut c0 = vec![T::one(); core.system().edge_count()];
    for &e in forced {
        c0[e.0] = T::zero();
    }
    for &e in forbidden {
        c0[e.0] = from_usize(n + 1);
    }
    let first = cheapest_stable_matching(core, d, &c0)?;
    if first.cost != from_usize(n - forced_set.len()) {
        return Err(Error::Infeasible);
    }
    let mut costs: Vec<&[T]> = vec![&c0];
    if let Some(c) = c {
        costs.push(c);
    }
    Ok(multi_cost_stable_matching(core, d, &costs)?.matching)
}

/// A chain of ring members with multiplicities and an arc set meeting
/// every member, as produced by the shortest-path packing.
#[derive(Clone, Debug)]
pub(crate) struct RingPacking<T> {
    pub chain: Vec<(NodeSet, T)>,
    /// Indices into the original arc list, in path order.
    pub blocker: Vec<usize>,
    pub value: T,
}

/// Packs ring members against `h`: add the ring's code arcs at cost zero,
/// take shortest-path labels `p`, and use the level sets `{p <= mu_i}` of
/// the distinct labels below `p(sink)`, each `mu_(i+1) - mu_i` times. The
/// original arcs of a shortest source-sink path meet every member.
pub(crate) fn ring_packing<T: Weight>(
    n: usize,
    arcs: &[(usize, usize, T)],
    ring: &RingCode,
) -> Result<RingPacking<T>> {
    let (s, t) = (ring.source(), ring.sink());
    let mut net = FlowNetwork::new(n, s, t);
    for &(u, v, h) in arcs {
        net.add_arc(u, v, Capacity::Infinite, h);
    }
    for (u, v) in ring.generators_with_sink_arcs() {
        net.add_arc(u, v, Capacity::Infinite, T::zero());
    }
    let sp = shortest_paths(&net)?;
    let top = sp.dist[t].ok_or(Error::Unbounded)?;
    let path = sp.path_to(&net, t).expect("sink is reached");
    let blocker: Vec<usize> = path.into_iter().filter(|&i| i < arcs.len()).collect();
    let mut levels: Vec<T> = sp.dist.iter().flatten().copied().filter(|&v| v < top).collect();
    levels.sort_unstable();
    levels.dedup();
    let mut chain = Vec::with_capacity(levels.len());
    for (i, &mu) in levels.iter().enumerate() {
        let next = levels.get(i + 1).copied().unwrap_or(top);
        let mut z = ring.empty_set();
        for v in 0..n {
            if sp.dist[v].is_some_and(|dv| dv <= mu) {
                z.insert(v);
            }
        }
        chain.push((z, next - mu));
    }
    debug_assert!(blocker.iter().map(|&i| arcs[i].2).sum::<T>() == top);
    Ok(RingPacking { chain, blocker, value: top })
}

/// Unit-weight packing by the two-phase greedy. Phase one grows
/// `V_1 = C(source)` by the heads of original arcs leaving `V_i` and closes
/// under the ring; phase two walks back from the sink along code arcs,
/// taking one original arc per level.
pub(crate) fn ring_two_phase(n: usize, arcs: &[(usize, usize)], ring: &RingCode) -> Result<(Vec<NodeSet>, Vec<usize>)> {
    let (s, t) = (ring.source(), ring.sink());
    if !ring.is_nontrivial() {
        return Ok((Vec::new(), Vec::new()));
    }
    let leaving = |z: &NodeSet| -> Vec<usize> {
        (0..arcs.len()).filter(|&i| z.contains(arcs[i].0) && !z.contains(arcs[i].1)).collect()
    };
    let mut chain = vec![ring.code(s).clone()];
    loop {
        let last = chain.last().expect("chain is nonempty");
        let out = leaving(last);
        if out.is_empty() {
            return Err(Error::Unbounded);
        }
        let mut grown = last.clone();
        out.iter().for_each(|&i| grown.insert(arcs[i].1));
        match ring.smallest_member_containing(&grown) {
            Some(next) => chain.push(next),
            None => break,
        }
    }

    let mut code_adj = vec![Vec::new(); n];
    for &(u, v) in ring.generators() {
        code_adj[u].push(v);
    }
    let mut blocker = Vec::with_capacity(chain.len());
    let mut target = t;
    for level in chain.iter().rev() {
        let out = leaving(level);
        let mut origin = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for &i in &out {
            let x = arcs[i].1;
            if origin[x] == usize::MAX {
                origin[x] = i;
                queue.push_back(x);
            }
        }
        while let Some(u) = queue.pop_front() {
            if u == target {
                break;
            }
            for &v in &code_adj[u] {
                if origin[v] == usize::MAX {
                    origin[v] = origin[u];
                    queue.push_back(v);
                }
            }
        }
        let arc = origin[target];
        assert!(arc != usize::MAX, "phase two always finds a predecessor");
        blocker.push(arc);
        target = arcs[arc].0;
    }
    blocker.reverse();
    Ok((chain, blocker))
}

/// An `h`-independent family (stable matchings with multiplicities, using
/// every edge `e` at most `h(e)` times) and a blocker of equal `h`-weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCertificate<T> {
    pub family: Vec<(Matching, T)>,
    pub blocker: Vec<EdgeId>,
    pub value: T,
}

impl<T: Weight> PackingCertificate<T> {
    /// Total multiplicity of the family.
    pub fn nu(&self) -> T {
        self.family.iter().map(|(_, k)| *k).sum()
    }

    pub fn tau(&self, h: &[T]) -> T {
        self.blocker.iter().map(|e| h[e.0]).sum()
    }

    /// Re-checks the certificate: members are stable (and `c`-cheapest when
    /// `c` is given), usage respects `h`, `nu = tau = value`, and no
    /// admissible stable matching avoids the blocker.
    pub fn verify(&self, core: &CoreSystem, d: &AssocDigraph, h: &[T], c: Option<&[T]>) -> std::result::Result<(), String> {
        let best = match c {
            Some(c) => Some(cheapest_stable_matching(core, d, c).map_err(|e| e.to_string())?.cost),
            None => None,
        };
        let mut used = vec![T::zero(); core.system().edge_count()];
        for (m, k) in &self.family {
            if *k <= T::zero() {
                return Err("nonpositive multiplicity".into());
            }
            if !core.is_stable(m).map_err(|e| e.to_string())? {
                return Err("family member is not stable".into());
            }
            if let (Some(c), Some(b)) = (c, best) {
                if cost_of(c, m) != b {
                    return Err("family member is not cheapest".into());
                }
            }
            m.iter().for_each(|e| used[e.0] = used[e.0] + *k);
        }
        if let Some(e) = core.system().edge_ids().find(|e| used[e.0] > h[e.0]) {
            return Err(format!("edge {} used more than h allows", core.system().edge_name(e)));
        }
        if self.nu() != self.value || self.tau(h) != self.value {
            return Err(format!("nu {} and tau {} differ from {}", self.nu(), self.tau(h), self.value));
        }
        let avoiding = constrained_stable_matching(core, d, &[], &self.blocker, c);
        match (avoiding, c, best) {
            (Err(Error::Infeasible), _, _) => Ok(()),
            (Ok(m), Some(c), Some(b)) if cost_of(c, &m) > b => Ok(()),
            (Ok(_), _, _) => Err("a stable matching avoids the blocker".into()),
            (Err(e), _, _) => Err(e.to_string()),
        }
    }
}

fn ring_for<T: Weight>(core: &CoreSystem, d: &AssocDigraph, c: Option<&[T]>) -> Result<RingCode> {
    match c {
        None => Ok(d.ring().clone()),
        Some(c) => {
            let g = shifted(core, c)?;
            let net = d.network(&RingCode::full(d.node_count(), d.source(), d.sink()), |e| Capacity::Finite(g[e.0]));
            Ok(minimizer_ring(d.ring(), &net)?.0)
        }
    }
}

/// Maximum `h`-independent family of stable matchings (of `c`-cheapest
/// ones when `c` is given) with a minimum blocker.
pub fn pack_h_independent<T: Weight>(
    core: &CoreSystem,
    d: &AssocDigraph,
    h: &[T],
    c: Option<&[T]>,
) -> Result<PackingCertificate<T>> {
    check_len(core, h)?;
    if core.stable_edges().iter().any(|e| h[e.0] < T::zero()) {
        return Err(Error::InvalidInput("h must be nonnegative".into()));
    }
    let ring = ring_for(core, d, c)?;
    let arcs: Vec<(usize, usize, T)> = d.stable_arcs().iter().map(|&(e, t, hd)| (t, hd, h[e.0])).collect();
    let packing = ring_packing(d.node_count(), &arcs, &ring)?;
    let family = packing.chain.iter().map(|(z, k)| (d.matching_unchecked(z), *k)).collect();
    let blocker = packing.blocker.iter().map(|&i| d.stable_arcs()[i].0).collect();
    Ok(PackingCertificate { family, blocker, value: packing.value })
}

/// The `h = 1` packing by the two-phase greedy instead of Dijkstra.
pub fn pack_unit_two_phase<T: Weight>(core: &CoreSystem, d: &AssocDigraph, c: Option<&[T]>) -> Result<PackingCertificate<T>> {
    let ring = ring_for(core, d, c)?;
    let arcs: Vec<(usize, usize)> = d.stable_arcs().iter().map(|&(_, t, h)| (t, h)).collect();
    let (chain, blocker) = ring_two_phase(d.node_count(), &arcs, &ring)?;
    Ok(PackingCertificate {
        value: from_usize(chain.len()),
        family: chain.iter().map(|z| (d.matching_unchecked(z), T::one())).collect(),
        blocker: blocker.iter().map(|&i| d.stable_arcs()[i].0).collect(),
    })
}
