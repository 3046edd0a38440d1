//! Finite posets, the poset of stable edges, and chain/antichain
//! decompositions with certificates.

mod dantichain;
mod dilworth;
mod gk;
mod mirsky;

use fixedbitset::FixedBitSet;

use crate::assoc::AssocDigraph;
use crate::error::{Error, Result};
use crate::prefs::{CoreSystem, EdgeId, Matching};

pub use dantichain::{
    cheapest_disjoint_d_antichains, extend_to_d_antichain, is_d_antichain_extendible, pack_d_antichains,
    AntichainPacking, DisjointAntichains,
};
pub use dilworth::{dilworth_weighted, min_chain_partition, ChainCover};
pub use gk::{greene_kleitman, weighted_greene_kleitman, GkCertificate};
pub use mirsky::{mirsky_cover, MirskyCover};

/// A strict partial order on `0..n`, stored transitively closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    below: Vec<FixedBitSet>,
}

impl Poset {
    /// The order generated by `pairs`, each `(x, y)` meaning `x > y`.
    pub fn from_relation(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut below = vec![FixedBitSet::with_capacity(n); n];
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::InvalidInput("relation names an unknown element".into()));
            }
            below[x].insert(y);
        }
        for k in 0..n {
            let row = below[k].clone();
            for set in below.iter_mut() {
                if set.contains(k) {
                    set.union_with(&row);
                }
            }
        }
        if (0..n).any(|x| below[x].contains(x)) {
            return Err(Error::InvalidInput("relation has a cycle".into()));
        }
        Ok(Poset { below })
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// `x > y`.
    pub fn greater(&self, x: usize, y: usize) -> bool {
        self.below[x].contains(y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.greater(x, y) || self.greater(y, x)
    }

    /// Elements strictly below `x`.
    pub fn below(&self, x: usize) -> &FixedBitSet {
        &self.below[x]
    }

    /// All pairs `(x, y)` with `x > y`.
    pub fn relations(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.below.iter().enumerate().flat_map(|(x, b)| b.ones().map(move |y| (x, y)))
    }

    pub fn is_antichain(&self, a: &[usize]) -> bool {
        a.iter().enumerate().all(|(i, &x)| a[..i].iter().all(|&y| x != y && !self.comparable(x, y)))
    }

    pub fn is_chain(&self, c: &[usize]) -> bool {
        c.iter().enumerate().all(|(i, &x)| c[..i].iter().all(|&y| x != y && self.comparable(x, y)))
    }

    /// The sub-order on `keep`, renumbered in the given order.
    pub fn restrict(&self, keep: &[usize]) -> Poset {
        let below = keep
            .iter()
            .map(|&x| {
                let mut set = FixedBitSet::with_capacity(keep.len());
                for (j, &y) in keep.iter().enumerate() {
                    if self.greater(x, y) {
                        set.insert(j);
                    }
                }
                set
            })
            .collect();
        Poset { below }
    }
}

/// The poset on the stable edges where `e > f` iff `f` is strictly
/// girl-better than the edge of `M_e` at the girl of `f`. Two stable edges
/// are incomparable iff some stable matching contains both; the maximal
/// antichains are exactly the stable matchings.
#[derive(Clone, Debug)]
pub struct InducedPoset {
    poset: Poset,
    elements: Vec<EdgeId>,
    index: Vec<Option<usize>>,
}

impl InducedPoset {
    pub fn new(core: &CoreSystem, d: &AssocDigraph) -> Self {
        let elements = core.stable_edges().to_vec();
        let mut index = vec![None; core.system().edge_count()];
        for (i, e) in elements.iter().enumerate() {
            index[e.0] = Some(i);
        }
        let heads: Vec<usize> = elements.iter().map(|&e| d.arc_of(e).expect("stable edge has an arc").1).collect();
        let below = elements
            .iter()
            .map(|&e| {
                let shore = d.shore_unchecked(core.girl_best_with(e).expect("stable edge has M_e"));
                let mut set = FixedBitSet::with_capacity(elements.len());
                for (j, &h) in heads.iter().enumerate() {
                    if shore.contains(h) {
                        set.insert(j);
                    }
                }
                set
            })
            .collect();
        let poset = Poset { below };
        debug_assert!((0..poset.len()).all(|x| poset.below(x).ones().all(|y| poset.below(y).is_subset(poset.below(x)))));
        InducedPoset { poset, elements, index }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn elements(&self) -> &[EdgeId] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> EdgeId {
        self.elements[i]
    }

    pub fn index_of(&self, e: EdgeId) -> Option<usize> {
        self.index.get(e.0).copied().flatten()
    }

    pub fn to_edges(&self, items: &[usize]) -> Vec<EdgeId> {
        items.iter().map(|&i| self.elements[i]).collect()
    }

    pub fn to_matching(&self, antichain: &[usize]) -> Matching {
        antichain.iter().map(|&i| self.elements[i]).collect()
    }

    pub fn from_matching(&self, m: &Matching) -> Option<Vec<usize>> {
        m.iter().map(|e| self.index_of(e)).collect()
    }

    /// Per-element values from per-edge values.
    pub fn lift<T: Copy>(&self, per_edge: &[T]) -> Vec<T> {
        self.elements.iter().map(|e| per_edge[e.0]).collect()
    }

    /// The girl-best stable matching containing an antichain.
    pub fn extend(&self, core: &CoreSystem, antichain: &[usize]) -> Result<Matching> {
        core.extend_to_stable(&self.to_matching(antichain))?.ok_or(Error::NotExtendible)
    }

    fn lift_checked<T: Copy>(&self, per_edge: &[T]) -> Result<Vec<T>> {
        if per_edge.len() != self.index.len() {
            return Err(Error::InvalidInput("one value per edge is required".into()));
        }
        Ok(self.lift(per_edge))
    }

    /// Mirsky cover for per-edge values `f`, its antichains extended to
    /// stable matchings.
    pub fn mirsky_cover<T: crate::scalar::Weight>(&self, core: &CoreSystem, f: &[T]) -> Result<(Vec<(Matching, T)>, Vec<EdgeId>)> {
        let cover = mirsky_cover(&self.poset, &self.lift_checked(f)?)?;
        let family = cover
            .antichains
            .iter()
            .map(|(a, k)| Ok((self.extend(core, a)?, *k)))
            .collect::<Result<Vec<_>>>()?;
        Ok((family, self.to_edges(&cover.chain)))
    }

    /// Maximum-weight stable matching for per-edge weights `w` and a chain
    /// cover of equal weight.
    pub fn dilworth<T: crate::scalar::Weight>(&self, core: &CoreSystem, w: &[T]) -> Result<(Matching, ChainCover<T>)> {
        let cover = dilworth_weighted(&self.poset, &self.lift_checked(w)?)?;
        Ok((self.extend(core, &cover.antichain)?, cover))
    }

    /// Whether the edge set `h` contains a stable matching: a witness, or
    /// fewer than `n` chains (anti-stable sets) covering the stable edges of `h`.
    pub fn includes_stable_matching(&self, core: &CoreSystem, h: &[EdgeId]) -> Result<Inclusion> {
        let mut w = vec![0i64; self.elements.len()];
        for &e in h {
            if let Some(i) = self.index_of(e) {
                w[i] = 1;
            }
        }
        let cover = dilworth_weighted(&self.poset, &w)?;
        if cover.weight == core.n() as i64 {
            Ok(Inclusion::Witness(self.to_matching(&cover.antichain)))
        } else {
            Ok(Inclusion::Cover(cover.chains.iter().map(|(c, _)| self.to_edges(c)).collect()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    Witness(Matching),
    Cover(Vec<Vec<EdgeId>>),
}
