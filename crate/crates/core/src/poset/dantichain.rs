//! D-antichains (antichains of maximum size): extension, packing against
//! blockers, and cheapest disjoint families, through the digraph built on a
//! chain partition.

use super::{dilworth_weighted, min_chain_partition, Poset};
use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::lcut::{min_lcut_in_ring, LCutCertificate};
use crate::optimize::ring_packing;
use crate::ringset::{NodeSet, RingCode};
use crate::scalar::{Capacity, Weight};

fn width(poset: &Poset) -> Result<usize> {
    Ok(dilworth_weighted(poset, &vec![1i64; poset.len()])?.weight as usize)
}

/// A D-antichain containing the antichain `a`, if one exists.
pub fn extend_to_d_antichain(poset: &Poset, a: &[usize]) -> Result<Option<Vec<usize>>> {
    if !poset.is_antichain(a) || a.iter().any(|&x| x >= poset.len()) {
        return Err(Error::InvalidInput("not an antichain".into()));
    }
    let alpha = width(poset)?;
    extend_with_width(poset, a, alpha)
}

fn extend_with_width(poset: &Poset, a: &[usize], alpha: usize) -> Result<Option<Vec<usize>>> {
    let w: Vec<i64> = (0..poset.len())
        .map(|x| i64::from(!a.contains(&x) && a.iter().all(|&y| !poset.comparable(x, y))))
        .collect();
    let extra = dilworth_weighted(poset, &w)?;
    if a.len() + extra.weight as usize != alpha {
        return Ok(None);
    }
    let mut out: Vec<usize> = a.iter().copied().chain(extra.antichain).collect();
    out.sort_unstable();
    Ok(Some(out))
}

/// Every antichain extends to a D-antichain iff every antichain of at most
/// two elements does.
pub fn is_d_antichain_extendible(poset: &Poset) -> Result<bool> {
    let alpha = width(poset)?;
    for x in 0..poset.len() {
        if extend_with_width(poset, &[x], alpha)?.is_none() {
            return Ok(false);
        }
        for y in x + 1..poset.len() {
            if !poset.comparable(x, y) && extend_with_width(poset, &[x, y], alpha)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The digraph of a chain partition: one source-sink path per chain with an
/// arc per element, largest first. A source-side set that is a prefix on
/// every path and contains `head(x)` whenever it contains `tail(y)` for some
/// `y < x` is left exactly by the arcs of a D-antichain, and vice versa.
struct ChainDigraph {
    n: usize,
    arc: Vec<(usize, usize)>,
    ring: RingCode,
}

impl ChainDigraph {
    fn new(poset: &Poset) -> Result<Self> {
        let chains = min_chain_partition(poset)?;
        let mut arc = vec![(0, 0); poset.len()];
        let mut n = 1;
        let mut pred_arcs = Vec::new();
        let mut ends = Vec::new();
        for chain in &chains {
            let mut prev = 0;
            for (j, &x) in chain.iter().enumerate() {
                if j + 1 == chain.len() {
                    ends.push(x);
                    arc[x] = (prev, usize::MAX);
                } else {
                    arc[x] = (prev, n);
                    if prev != 0 {
                        pred_arcs.push((n, prev));
                    }
                    prev = n;
                    n += 1;
                }
            }
        }
        let sink = n;
        n += 1;
        for &x in &ends {
            arc[x].1 = sink;
        }
        let mut generators = pred_arcs;
        for (x, y) in poset.relations() {
            generators.push((arc[y].0, arc[x].1));
        }
        let ring = RingCode::from_generators(n, 0, sink, generators);
        Ok(ChainDigraph { n, arc, ring })
    }

    fn antichain_of(&self, z: &NodeSet) -> Vec<usize> {
        (0..self.arc.len()).filter(|&x| z.contains(self.arc[x].0) && !z.contains(self.arc[x].1)).collect()
    }
}

/// D-antichains with multiplicities, using each element `x` at most `h(x)`
/// times, and a blocker of equal `h`-weight meeting every D-antichain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntichainPacking<T> {
    pub family: Vec<(Vec<usize>, T)>,
    pub blocker: Vec<usize>,
    pub value: T,
}

/// Packs D-antichains against `h` on a D-antichain-extendible poset.
pub fn pack_d_antichains<T: Weight>(poset: &Poset, h: &[T]) -> Result<AntichainPacking<T>> {
    if !is_d_antichain_extendible(poset)? {
        return Err(Error::NotExtendible);
    }
    pack_unchecked(poset, h)
}

pub(crate) fn pack_unchecked<T: Weight>(poset: &Poset, h: &[T]) -> Result<AntichainPacking<T>> {
    if h.len() != poset.len() || h.iter().any(|&v| v < T::zero()) {
        return Err(Error::InvalidInput("h must give a nonnegative value per element".into()));
    }
    let cd = ChainDigraph::new(poset)?;
    let arcs: Vec<(usize, usize, T)> = (0..poset.len()).map(|x| (cd.arc[x].0, cd.arc[x].1, h[x])).collect();
    let packing = ring_packing(cd.n, &arcs, &cd.ring)?;
    Ok(AntichainPacking {
        family: packing.chain.iter().map(|(z, k)| (cd.antichain_of(z), *k)).collect(),
        blocker: packing.blocker,
        value: packing.value,
    })
}

#[derive(Clone, Debug)]
pub struct DisjointAntichains<T> {
    pub antichains: Vec<Vec<usize>>,
    pub total_cost: T,
    pub certificate: LCutCertificate<T>,
}

/// `ell` pairwise disjoint D-antichains minimizing the total cost. With a
/// single cost vector all antichains share it; with `ell` vectors the
/// `i`-th antichain is charged by the `i`-th, solved on the ordinal sum of
/// `ell` copies of the poset. That product is a relaxation: when its
/// optimum picks overlapping antichains the call fails with
/// `RelaxationGap` carrying the lower bound.
pub fn cheapest_disjoint_d_antichains<T: Weight>(
    poset: &Poset,
    ell: usize,
    costs: &[Vec<T>],
) -> Result<DisjointAntichains<T>> {
    let n = poset.len();
    if ell == 0 || costs.iter().any(|c| c.len() != n) || !(costs.len() == 1 || costs.len() == ell) {
        return Err(Error::InvalidInput("expected one cost vector, or one per antichain".into()));
    }
    if !is_d_antichain_extendible(poset)? {
        return Err(Error::NotExtendible);
    }
    if costs.len() == 1 {
        return single_cost(poset, ell, &costs[0]);
    }
    let stacked = Poset::from_relation(
        n * ell,
        (0..ell).flat_map(|i| {
            let within = poset.relations().map(move |(x, y)| (i * n + x, i * n + y));
            let across = (0..i).flat_map(move |j| (0..n).flat_map(move |x| (0..n).map(move |y| (i * n + x, j * n + y))));
            within.chain(across).collect::<Vec<_>>()
        }),
    )?;
    let c: Vec<T> = costs.iter().flatten().copied().collect();
    let relaxed = single_cost(&stacked, ell, &c)?;
    let mut per_copy: Vec<Option<Vec<usize>>> = vec![None; ell];
    for a in &relaxed.antichains {
        let copy = a.first().map_or(0, |&x| x / n);
        if per_copy[copy].is_some() {
            return Err(Error::RelaxationGap { lower_bound: relaxed.total_cost.to_string() });
        }
        per_copy[copy] = Some(a.iter().map(|&x| x % n).collect());
    }
    let antichains: Vec<Vec<usize>> = per_copy.into_iter().map(|a| a.expect("one antichain per copy")).collect();
    let overlap = (0..ell).any(|i| (0..i).any(|j| antichains[i].iter().any(|x| antichains[j].contains(x))));
    if overlap {
        return Err(Error::RelaxationGap { lower_bound: relaxed.total_cost.to_string() });
    }
    Ok(DisjointAntichains { antichains, total_cost: relaxed.total_cost, certificate: relaxed.certificate })
}

fn single_cost<T: Weight>(poset: &Poset, ell: usize, c: &[T]) -> Result<DisjointAntichains<T>> {
    let ones = vec![T::one(); poset.len()];
    let packing = pack_unchecked(poset, &ones)?;
    let available = packing.value.to_usize().unwrap_or(usize::MAX);
    if available < ell {
        return Err(Error::InsufficientDisjoint { requested: ell, available, blocker: packing.blocker });
    }
    let cd = ChainDigraph::new(poset)?;
    let low = c.iter().copied().min().unwrap_or(T::zero());
    let mut net = FlowNetwork::new(cd.n, 0, cd.n - 1);
    for x in 0..poset.len() {
        net.add_arc(cd.arc[x].0, cd.arc[x].1, Capacity::Finite(c[x] - low), T::zero());
    }
    let certificate = min_lcut_in_ring(&net, &cd.ring, ell)?;
    let antichains: Vec<Vec<usize>> = certificate.shores.iter().map(|z| cd.antichain_of(z)).collect();
    let total_cost = antichains.iter().flatten().map(|&x| c[x]).sum();
    Ok(DisjointAntichains { antichains, total_cost, certificate })
}
