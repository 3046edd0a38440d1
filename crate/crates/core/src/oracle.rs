//! Fixtures, a seeded instance generator and brute-force reference
//! searches. Nothing here calls the algorithms it is meant to check: the
//! stability test is the definition, and every search is exhaustive.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::flow::FlowNetwork;
use crate::poset::Poset;
use crate::prefs::{EdgeId, Matching, PreferenceSystem};
use crate::scalar::Weight;

/// Largest side accepted by [`enumerate_stable`].
pub const MAX_ENUM_SIDE: usize = 8;

/// One boy, one girl, one edge.
pub fn fixture_single() -> PreferenceSystem {
    PreferenceSystem::from_rankings(&[vec![0]], &[vec![0]]).expect("fixture is valid")
}

/// Two boys and two girls with opposed preferences: the boy-optimal
/// matching is `{u1w1, u2w2}` and the girl-optimal one `{u1w2, u2w1}`.
pub fn fixture_crossed() -> PreferenceSystem {
    PreferenceSystem::from_rankings(&[vec![0, 1], vec![1, 0]], &[vec![1, 0], vec![0, 1]]).expect("fixture is valid")
}

/// Cyclic 3x3 system with exactly three stable matchings
/// `M_k = {u_i w_(i+k)}`, `k = 0, 1, 2`, where `M_0` is boy-optimal.
pub fn fixture_cyclic3() -> PreferenceSystem {
    fixture_cyclic(3)
}

/// Cyclic `n x n` Latin system: `u_i` ranks `w_i, w_(i+1), ...` and `w_j`
/// ranks `u_(j+1), u_(j+2), ..., u_j`.
pub fn fixture_cyclic(n: usize) -> PreferenceSystem {
    let boys: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|k| (i + k) % n).collect()).collect();
    let girls: Vec<Vec<usize>> = (0..n).map(|j| (1..=n).map(|k| (j + k) % n).collect()).collect();
    PreferenceSystem::from_rankings(&boys, &girls).expect("fixture is valid")
}

/// The cyclic `n x n` system with each pair dropped with probability `drop`
/// and `swaps` random adjacent transpositions applied to random lists.
/// These keep many stable matchings, unlike uniform random lists.
pub fn perturbed_cyclic(n: usize, swaps: usize, drop: f64, seed: u64) -> PreferenceSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gone: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(drop.clamp(0.0, 1.0))).collect()).collect();
    let mut boys: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).map(|k| (i + k) % n).filter(|&j| !gone[i][j]).collect()).collect();
    let mut girls: Vec<Vec<usize>> =
        (0..n).map(|j| (1..=n).map(|k| (j + k) % n).filter(|&i| !gone[i][j]).collect()).collect();
    for _ in 0..swaps {
        let side = if rng.gen_bool(0.5) { &mut boys } else { &mut girls };
        let list = &mut side[rng.gen_range(0..n.max(1))];
        if list.len() > 1 {
            let k = rng.gen_range(0..list.len() - 1);
            list.swap(k, k + 1);
        }
    }
    PreferenceSystem::from_rankings(&boys, &girls).expect("generated lists are valid")
}

/// A random simple system: each pair is an edge with probability
/// `density`, and every list is a uniform random order.
pub fn random_instance(n_boys: usize, n_girls: usize, density: f64, seed: u64) -> PreferenceSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boy_lists = vec![Vec::new(); n_boys];
    let mut girl_lists = vec![Vec::new(); n_girls];
    for u in 0..n_boys {
        for w in 0..n_girls {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                boy_lists[u].push(w);
                girl_lists[w].push(u);
            }
        }
    }
    for list in boy_lists.iter_mut().chain(girl_lists.iter_mut()) {
        list.shuffle(&mut rng);
    }
    PreferenceSystem::from_rankings(&boy_lists, &girl_lists).expect("generated rankings are mutual")
}

/// Stability straight from the definition.
pub fn is_stable_by_definition(system: &PreferenceSystem, m: &Matching) -> bool {
    let mut boys = BTreeSet::new();
    let mut girls = BTreeSet::new();
    for e in m.iter() {
        if e.0 >= system.edge_count() || !boys.insert(system.edge(e).boy) || !girls.insert(system.edge(e).girl) {
            return false;
        }
    }
    system.edge_ids().filter(|f| !m.contains(*f)).all(|f| {
        let edge = system.edge(f);
        m.iter().any(|e| {
            let other = system.edge(e);
            (other.boy == edge.boy && system.boy_rank(e) < system.boy_rank(f))
                || (other.girl == edge.girl && system.girl_rank(e) < system.girl_rank(f))
        })
    })
}

/// All stable matchings, by backtracking over the boys. Fails when a side
/// exceeds [`MAX_ENUM_SIDE`] or more than `max_count` matchings exist.
pub fn enumerate_stable(system: &PreferenceSystem, max_count: usize) -> Result<Vec<Matching>> {
    let side = system.boys().len().max(system.girls().len());
    if side > MAX_ENUM_SIDE {
        return Err(Error::ResourceBound { what: "side size", limit: MAX_ENUM_SIDE, actual: side });
    }
    let mut last_boy = vec![None; system.girls().len()];
    for e in system.edge_ids() {
        let edge = system.edge(e);
        last_boy[edge.girl] = Some(last_boy[edge.girl].map_or(edge.boy, |b: usize| b.max(edge.boy)));
    }
    let mut search = Enumeration {
        system,
        last_boy,
        boy_choice: vec![None; system.boys().len()],
        girl_taken: vec![None; system.girls().len()],
        found: Vec::new(),
        max_count,
    };
    search.boy(0)?;
    Ok(search.found)
}

struct Enumeration<'a> {
    system: &'a PreferenceSystem,
    last_boy: Vec<Option<usize>>,
    boy_choice: Vec<Option<EdgeId>>,
    girl_taken: Vec<Option<EdgeId>>,
    found: Vec<Matching>,
    max_count: usize,
}

impl Enumeration<'_> {
    fn boy(&mut self, u: usize) -> Result<()> {
        let sys = self.system;
        if u == sys.boys().len() {
            if self.found.len() == self.max_count {
                return Err(Error::ResourceBound { what: "stable matchings", limit: self.max_count, actual: self.max_count + 1 });
            }
            self.found.push(self.boy_choice.iter().flatten().copied().collect());
            return Ok(());
        }
        let options: Vec<Option<EdgeId>> = sys.boy_prefs(u).iter().map(|&e| Some(e)).chain([None]).collect();
        for choice in options {
            if let Some(e) = choice {
                if self.girl_taken[sys.edge(e).girl].is_some() {
                    continue;
                }
            }
            // Edges u prefers to his choice need their girl to do better.
            let cutoff = choice.map_or(usize::MAX, |e| sys.boy_rank(e));
            let dead = sys.boy_prefs(u).iter().take_while(|f| sys.boy_rank(**f) < cutoff).any(|&f| {
                self.girl_taken[sys.edge(f).girl].is_some_and(|g| sys.girl_rank(g) > sys.girl_rank(f))
            });
            if dead {
                continue;
            }
            self.boy_choice[u] = choice;
            if let Some(e) = choice {
                self.girl_taken[sys.edge(e).girl] = Some(e);
            }
            if self.girls_done_at(u) {
                self.boy(u + 1)?;
            }
            if let Some(e) = choice {
                self.girl_taken[sys.edge(e).girl] = None;
            }
            self.boy_choice[u] = None;
        }
        Ok(())
    }

    /// Checks every girl whose last neighbour is `u`.
    fn girls_done_at(&self, u: usize) -> bool {
        let sys = self.system;
        (0..sys.girls().len()).filter(|&w| self.last_boy[w] == Some(u)).all(|w| {
            sys.girl_prefs(w).iter().all(|&f| {
                if self.girl_taken[w] == Some(f) {
                    return true;
                }
                let boy = sys.edge(f).boy;
                let boy_better = self.boy_choice[boy].is_some_and(|e| sys.boy_rank(e) < sys.boy_rank(f));
                let girl_better = self.girl_taken[w].is_some_and(|e| sys.girl_rank(e) < sys.girl_rank(f));
                boy_better || girl_better
            })
        })
    }
}

/// Minimum `h`-weight edge set meeting every member of `family`, by branch
/// and bound on the first member not yet met. `None` if some member is empty.
pub fn brute_min_blocker<T: Weight>(family: &[Matching], h: impl Fn(EdgeId) -> T) -> Option<(T, Vec<EdgeId>)> {
    fn go<T: Weight>(
        family: &[Matching],
        h: &dyn Fn(EdgeId) -> T,
        chosen: &mut Vec<EdgeId>,
        cost: T,
        best: &mut Option<(T, Vec<EdgeId>)>,
    ) {
        if best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            return;
        }
        match family.iter().find(|m| !chosen.iter().any(|&e| m.contains(e))) {
            None => *best = Some((cost, chosen.clone())),
            Some(m) => {
                for e in m.iter() {
                    chosen.push(e);
                    go(family, h, chosen, cost + h(e), best);
                    chosen.pop();
                }
            }
        }
    }
    if family.iter().any(Matching::is_empty) {
        return None;
    }
    let mut best = None;
    go(family, &h, &mut Vec::new(), T::zero(), &mut best);
    best
}

/// Largest number of members of `family` (with repetition) such that every
/// edge `e` lies in at most `h(e)` of them; `cap` bounds the search.
pub fn brute_max_packing(family: &[Matching], h: impl Fn(EdgeId) -> usize, cap: usize) -> usize {
    fn go(family: &[Matching], h: &dyn Fn(EdgeId) -> usize, from: usize, used: &mut Vec<usize>, count: usize, cap: usize) -> usize {
        if count == cap {
            return count;
        }
        let mut best = count;
        for i in from..family.len() {
            if family[i].iter().all(|e| used[e.0] < h(e)) {
                family[i].iter().for_each(|e| used[e.0] += 1);
                best = best.max(go(family, h, i, used, count + 1, cap));
                family[i].iter().for_each(|e| used[e.0] -= 1);
                if best == cap {
                    break;
                }
            }
        }
        best
    }
    let edges = family.iter().flat_map(|m| m.iter()).map(|e| e.0 + 1).max().unwrap_or(0);
    go(family, &h, 0, &mut vec![0; edges], 0, cap)
}

/// Maximum `w`-weight of the union of `ell` members of `family`.
pub fn brute_max_union<T: Weight>(family: &[Matching], ell: usize, w: impl Fn(EdgeId) -> T) -> T {
    fn go<T: Weight>(family: &[Matching], ell: usize, from: usize, acc: &mut BTreeSet<EdgeId>, w: &dyn Fn(EdgeId) -> T) -> T {
        if ell == 0 || from == family.len() {
            return acc.iter().map(|&e| w(e)).sum();
        }
        let mut best = T::min_value();
        for i in from..family.len() {
            let added: Vec<EdgeId> = family[i].iter().filter(|e| acc.insert(*e)).collect();
            best = best.max(go(family, ell - 1, i, acc, w));
            added.iter().for_each(|e| {
                acc.remove(e);
            });
        }
        best
    }
    go(family, ell, 0, &mut BTreeSet::new(), &w)
}

/// Minimum total cost of `ell` pairwise disjoint members of `family`.
pub fn brute_disjoint_min_cost<T: Weight>(family: &[Matching], ell: usize, c: impl Fn(EdgeId) -> T) -> Option<T> {
    fn go<T: Weight>(family: &[Matching], costs: &[T], ell: usize, from: usize, chosen: &mut Vec<usize>) -> Option<T> {
        if ell == 0 {
            return Some(chosen.iter().map(|&i| costs[i]).sum());
        }
        let mut best: Option<T> = None;
        for i in from..family.len() {
            if chosen.iter().all(|&j| family[j].is_disjoint(&family[i])) {
                chosen.push(i);
                if let Some(v) = go(family, costs, ell - 1, i + 1, chosen) {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
                chosen.pop();
            }
        }
        best
    }
    let costs: Vec<T> = family.iter().map(|m| m.iter().map(&c).sum()).collect();
    go(family, &costs, ell, 0, &mut Vec::new())
}

/// Members of `family` minimizing `key`, in family order.
pub fn brute_minimizers<K: Ord + Clone>(family: &[Matching], key: impl Fn(&Matching) -> K) -> Vec<Matching> {
    let keys: Vec<K> = family.iter().map(&key).collect();
    match keys.iter().min() {
        None => Vec::new(),
        Some(best) => family.iter().zip(&keys).filter(|(_, k)| *k == best).map(|(m, _)| m.clone()).collect(),
    }
}

/// The member every girl weakly prefers to all others, if one exists.
pub fn brute_girl_best(system: &PreferenceSystem, family: &[Matching]) -> Option<Matching> {
    let partner_rank = |m: &Matching| {
        let mut r = vec![usize::MAX; system.girls().len()];
        for e in m.iter() {
            r[system.edge(e).girl] = system.girl_rank(e);
        }
        r
    };
    let ranks: Vec<Vec<usize>> = family.iter().map(partner_rank).collect();
    (0..family.len())
        .find(|&i| ranks.iter().all(|other| ranks[i].iter().zip(other).all(|(a, b)| a <= b)))
        .map(|i| family[i].clone())
}

/// Minimum capacity of the union of `ell` pairwise arc-disjoint finite
/// source-sink cuts. A cut may repeat only if it is empty, which happens
/// when the sink is unreachable. Intended for at most 10 nodes and 128 arcs.
pub fn brute_min_lcut<T: Weight>(net: &FlowNetwork<T>, ell: usize) -> Option<T> {
    let n = net.node_count();
    let (s, t) = (net.source(), net.sink());
    let others: Vec<usize> = (0..n).filter(|&v| v != s && v != t).collect();
    let mut cuts: Vec<(u128, T)> = Vec::new();
    for mask in 0u32..(1 << others.len()) {
        let mut inside = vec![false; n];
        inside[s] = true;
        for (k, &v) in others.iter().enumerate() {
            inside[v] = mask >> k & 1 == 1;
        }
        let mut arcs = 0u128;
        let mut cap = Some(T::zero());
        for (i, a) in net.arcs().iter().enumerate() {
            if inside[a.tail] && !inside[a.head] {
                arcs |= 1 << i;
                cap = match (cap, a.cap.finite()) {
                    (Some(c), Some(v)) => Some(c + v),
                    _ => None,
                };
            }
        }
        if let Some(c) = cap {
            cuts.push((arcs, c));
        }
    }
    fn go<T: Weight>(cuts: &[(u128, T)], ell: usize, from: usize, used: u128, cost: T, best: &mut Option<T>) {
        if ell == 0 {
            *best = Some(best.map_or(cost, |b| b.min(cost)));
            return;
        }
        for i in from..cuts.len() {
            if cuts[i].0 & used == 0 {
                go(cuts, ell - 1, i, used | cuts[i].0, cost + cuts[i].1, best);
            }
        }
    }
    let mut best = None;
    go(&cuts, ell, 0, 0, T::zero(), &mut best);
    best
}

/// Maximum weight of a union of `ell` antichains: a set is such a union
/// iff its longest chain has at most `ell` elements.
pub fn brute_max_k_family<T: Weight>(poset: &Poset, ell: usize, w: &[T]) -> T {
    let n = poset.len();
    assert!(n <= 20, "brute force is limited to 20 elements");
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| poset.greater(x, y)).count());
    let mut best = T::zero();
    for mask in 0u32..(1 << n) {
        let mut height = vec![0usize; n];
        let mut ok = true;
        for &x in &order {
            if mask >> x & 1 == 0 {
                continue;
            }
            height[x] = 1 + (0..n).filter(|&y| mask >> y & 1 == 1 && poset.greater(x, y)).map(|y| height[y]).max().unwrap_or(0);
            if height[x] > ell {
                ok = false;
                break;
            }
        }
        if ok {
            best = best.max((0..n).filter(|&x| mask >> x & 1 == 1).map(|x| w[x]).sum());
        }
    }
    best
}

/// Maximum weight antichain by backtracking.
pub fn brute_max_antichain<T: Weight>(poset: &Poset, w: &[T]) -> (T, Vec<usize>) {
    fn go<T: Weight>(poset: &Poset, w: &[T], x: usize, chosen: &mut Vec<usize>, best: &mut (T, Vec<usize>)) {
        if x == poset.len() {
            let v: T = chosen.iter().map(|&y| w[y]).sum();
            if v > best.0 {
                *best = (v, chosen.clone());
            }
            return;
        }
        go(poset, w, x + 1, chosen, best);
        if chosen.iter().all(|&y| !poset.comparable(x, y)) {
            chosen.push(x);
            go(poset, w, x + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = (T::zero(), Vec::new());
    go(poset, w, 0, &mut Vec::new(), &mut best);
    best
}

/// Maximum `f`-weight of a chain.
pub fn brute_max_weight_chain<T: Weight>(poset: &Poset, f: &[T]) -> T {
    let n = poset.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (0..n).filter(|&y| poset.greater(x, y)).count());
    let mut best_at = vec![T::zero(); n];
    for &x in &order {
        best_at[x] = f[x] + (0..n).filter(|&y| poset.greater(x, y)).map(|y| best_at[y]).max().unwrap_or(T::zero());
    }
    best_at.into_iter().max().unwrap_or(T::zero())
}

/// Lexicographically smallest level-count vector (level 1 first, trailing
/// zeros dropped) over the family, and the girl-best matching attaining it.
pub fn brute_lex_fair(
    system: &PreferenceSystem,
    family: &[Matching],
    boy_level: impl Fn(EdgeId) -> usize,
    girl_level: impl Fn(EdgeId) -> usize,
) -> Option<(Vec<usize>, Matching)> {
    let top = family.iter().flat_map(|m| m.iter()).map(|e| boy_level(e).max(girl_level(e))).max().unwrap_or(0);
    let counts = |m: &Matching| {
        let mut v = vec![0; top];
        for e in m.iter() {
            v[boy_level(e) - 1] += 1;
            v[girl_level(e) - 1] += 1;
        }
        v
    };
    let best = brute_minimizers(family, counts);
    let winner = brute_girl_best(system, &best)?;
    let mut vector = counts(&winner);
    while vector.last() == Some(&0) {
        vector.pop();
    }
    Some((vector, winner))
}
