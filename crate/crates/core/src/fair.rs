//! Fair stable matchings: lexicographically fewest nodes at level 1, then
//! at level 2, and so on, for levels given per (node, stable edge).

use crate::assoc::AssocDigraph;
use crate::error::{Error, Result};
use crate::optimize::{cheapest_stable_matching, cost_of, minimizer_ring};
use crate::prefs::{CoreSystem, EdgeId, Matching};
use crate::ringset::RingCode;
use crate::scalar::Capacity;

/// Levels of the stable edges at both endpoints. At each node the levels of
/// its stable edges are distinct and larger for better edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelAssignment {
    boy: Vec<u32>,
    girl: Vec<u32>,
    max_level: u32,
}

impl LevelAssignment {
    /// Levels indexed by core edge id; entries off the stable edges are ignored.
    pub fn new(core: &CoreSystem, boy: Vec<Option<u32>>, girl: Vec<Option<u32>>) -> Result<Self> {
        let m = core.system().edge_count();
        if boy.len() != m || girl.len() != m {
            return Err(Error::InvalidLevels("one entry per edge is required".into()));
        }
        let max_level = 2 * core.stable_edges().len() as u32;
        let pick = |levels: &[Option<u32>], side: &str| -> Result<Vec<u32>> {
            let mut out = vec![0; m];
            for &e in core.stable_edges() {
                match levels[e.0] {
                    Some(l) if (1..=max_level).contains(&l) => out[e.0] = l,
                    Some(l) => {
                        return Err(Error::InvalidLevels(format!("level {l} outside 1..={max_level}")));
                    }
                    None => {
                        return Err(Error::InvalidLevels(format!(
                            "no {side} level for stable edge `{}`",
                            core.system().edge_name(e)
                        )))
                    }
                }
            }
            Ok(out)
        };
        let levels = LevelAssignment { boy: pick(&boy, "boy")?, girl: pick(&girl, "girl")?, max_level };
        let system = core.system();
        let lists = (0..system.boys().len())
            .map(|u| (system.boy_prefs(u), &levels.boy))
            .chain((0..system.girls().len()).map(|w| (system.girl_prefs(w), &levels.girl)));
        for (list, side) in lists {
            let seq: Vec<u32> = list.iter().filter(|e| core.is_stable_edge(**e)).map(|e| side[e.0]).collect();
            if seq.windows(2).any(|p| p[0] <= p[1]) {
                return Err(Error::InvalidLevels("levels must decrease along each preference list".into()));
            }
        }
        Ok(levels)
    }

    /// At a node with `k` stable edges, the `j`-th best gets level `k - j`.
    pub fn rank_levels(core: &CoreSystem) -> Self {
        let system = core.system();
        let m = system.edge_count();
        let mut boy = vec![None; m];
        let mut girl = vec![None; m];
        let fill = |list: &[EdgeId], out: &mut Vec<Option<u32>>| {
            let stable: Vec<EdgeId> = list.iter().copied().filter(|&e| core.is_stable_edge(e)).collect();
            for (j, e) in stable.iter().enumerate() {
                out[e.0] = Some((stable.len() - j) as u32);
            }
        };
        (0..system.boys().len()).for_each(|u| fill(system.boy_prefs(u), &mut boy));
        (0..system.girls().len()).for_each(|w| fill(system.girl_prefs(w), &mut girl));
        LevelAssignment::new(core, boy, girl).expect("rank levels are valid")
    }

    pub fn boy_level(&self, e: EdgeId) -> u32 {
        self.boy[e.0]
    }

    pub fn girl_level(&self, e: EdgeId) -> u32 {
        self.girl[e.0]
    }

    /// Largest admissible level, twice the number of stable edges.
    pub fn max_level(&self) -> u32 {
        self.max_level
    }
}

/// Number of nodes at each level `1..=max_level` (entry `l - 1`).
pub fn level_count_vector(levels: &LevelAssignment, m: &Matching) -> Vec<usize> {
    let mut counts = vec![0; levels.max_level as usize];
    for e in m.iter() {
        counts[levels.boy_level(e) as usize - 1] += 1;
        counts[levels.girl_level(e) as usize - 1] += 1;
    }
    counts
}

/// Stage data: `lambdas[i]` is the `i`-th level reached and `betas[i]` the
/// number of nodes at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairSignature {
    pub lambdas: Vec<u32>,
    pub betas: Vec<usize>,
}

/// Staged algorithm. Stage `i` finds the largest `lambda` for which some
/// matching in the current ring puts every node either at an earlier stage
/// level or at level `>= lambda`, restricts the ring to those matchings,
/// then minimizes the number of nodes at `lambda` (cost 2/1/0 per edge).
/// The largest feasible `lambda` is found by binary search, feasibility
/// being monotone. Returns the girl-best fair matching.
pub fn fair_stable_matching(core: &CoreSystem, d: &AssocDigraph, levels: &LevelAssignment) -> Result<(Matching, FairSignature)> {
    let mut candidates: Vec<u32> = core
        .stable_edges()
        .iter()
        .flat_map(|&e| [levels.boy_level(e), levels.girl_level(e)])
        .collect();
    candidates.sort_unstable();
    candidates.dedup();
    let empty = RingCode::full(d.node_count(), d.source(), d.sink());
    let m = core.system().edge_count();
    let mut ring = d.ring().clone();
    let mut sig = FairSignature { lambdas: Vec::new(), betas: Vec::new() };
    let mut placed = 0;
    let at_stage_level = |lambdas: &[u32], l: u32| lambdas.contains(&l);
    while placed < 2 * core.n() {
        let admissible_cost = |lambdas: &[u32], lambda: u32| -> Vec<i64> {
            let mut c = vec![0i64; m];
            for &e in core.stable_edges() {
                let ok = |l: u32| l >= lambda || at_stage_level(lambdas, l);
                c[e.0] = i64::from(!(ok(levels.boy_level(e)) && ok(levels.girl_level(e))));
            }
            c
        };
        let feasible = |ring: &RingCode, lambda: u32| -> Result<bool> {
            let c = admissible_cost(&sig.lambdas, lambda);
            let net = d.network(&empty, |e| Capacity::Finite(c[e.0]));
            Ok(minimizer_ring(ring, &net)?.1 == Some(0))
        };
        let prev = sig.lambdas.last().copied().unwrap_or(0);
        let pool: Vec<u32> = candidates.iter().copied().filter(|&l| l > prev).collect();
        // Largest index whose level is feasible; the first always is.
        let (mut lo, mut hi) = (0usize, pool.len());
        if pool.is_empty() || !feasible(&ring, pool[0])? {
            return Err(Error::InvalidLevels("levels admit no further stage".into()));
        }
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if feasible(&ring, pool[mid])? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let lambda = pool[lo];
        let c = admissible_cost(&sig.lambdas, lambda);
        ring = minimizer_ring(&ring, &d.network(&empty, |e| Capacity::Finite(c[e.0])))?.0;
        let stage_cost = |e: EdgeId| i64::from(levels.boy_level(e) == lambda) + i64::from(levels.girl_level(e) == lambda);
        let (next, beta) = minimizer_ring(&ring, &d.network(&empty, |e| Capacity::Finite(stage_cost(e))))?;
        ring = next;
        let beta = beta.unwrap_or(0) as usize;
        sig.lambdas.push(lambda);
        sig.betas.push(beta);
        placed += beta;
    }
    let matching = d.matching_of(ring.code(d.source()))?;
    Ok((matching, sig))
}

/// Stable matching with the fewest nodes holding their worst stable edge.
pub fn worst_edge_minimizer(core: &CoreSystem, d: &AssocDigraph) -> Result<(Matching, i64)> {
    let system = core.system();
    let mut c = vec![0i64; system.edge_count()];
    let worst = |list: &[EdgeId]| list.iter().rev().copied().find(|&e| core.is_stable_edge(e));
    for u in 0..system.boys().len() {
        if let Some(e) = worst(system.boy_prefs(u)) {
            c[e.0] += 1;
        }
    }
    for w in 0..system.girls().len() {
        if let Some(e) = worst(system.girl_prefs(w)) {
            c[e.0] += 1;
        }
    }
    let best = cheapest_stable_matching(core, d, &c)?;
    let value = cost_of(&c, &best.matching);
    Ok((best.matching, value))
}
