use super::Poset;
use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Disjoint antichains and disjoint chains (chains may repeat an element
/// up to its weight in the weighted version) that are orthogonal: every
/// chain meets every antichain exactly once and every element missed by
/// the chains, or covered fewer than `w` times, lies in some antichain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkCertificate {
    pub ell: usize,
    pub antichains: Vec<Vec<usize>>,
    /// Chains listed from the largest element down.
    pub chains: Vec<Vec<usize>>,
    /// Weight of the union of the antichains.
    pub value: i64,
}

impl GkCertificate {
    /// Checks both families and that `ell |C| + sum of uncovered weight`
    /// equals the weight of the union of the antichains.
    pub fn verify(&self, poset: &Poset, w: &[i64]) -> std::result::Result<(), String> {
        let n = poset.len();
        let mut in_antichain = vec![false; n];
        if self.antichains.len() != self.ell {
            return Err("wrong number of antichains".into());
        }
        for a in &self.antichains {
            if !poset.is_antichain(a) {
                return Err("an antichain contains comparable elements".into());
            }
            for &x in a {
                if std::mem::replace(&mut in_antichain[x], true) {
                    return Err("antichains overlap".into());
                }
            }
        }
        let mut used = vec![0i64; n];
        for c in &self.chains {
            if !poset.is_chain(c) {
                return Err("a chain contains incomparable elements".into());
            }
            c.iter().for_each(|&x| used[x] += 1);
            for a in &self.antichains {
                if c.iter().filter(|x| a.contains(x)).count() != 1 {
                    return Err("a chain does not meet an antichain exactly once".into());
                }
            }
        }
        let mut slack = 0;
        for x in 0..n {
            if used[x] > w[x] {
                return Err(format!("element {x} is on more chains than its weight"));
            }
            if used[x] < w[x] && !in_antichain[x] {
                return Err(format!("element {x} is uncovered and outside the antichains"));
            }
            slack += w[x] - used[x];
        }
        let union: i64 = (0..n).filter(|&x| in_antichain[x]).map(|x| w[x]).sum();
        let primal = self.ell as i64 * self.chains.len() as i64 + slack;
        if union != self.value || primal != union {
            return Err(format!("chain side {primal} differs from antichain side {union}"));
        }
        Ok(())
    }
}

struct Net {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Net {
    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) {
        self.adj[u].push(self.head.len());
        self.head.push(v);
        self.cap.push(cap);
        self.cost.push(cost);
        self.adj[v].push(self.head.len());
        self.head.push(u);
        self.cap.push(0);
        self.cost.push(-cost);
    }

    /// Bellman-Ford distances from `s` over positive-capacity edges and the
    /// extra arcs given, with the predecessor edge of each node.
    fn distances(&self, s: usize, extra: &[(usize, usize)]) -> (Vec<Option<i64>>, Vec<Option<usize>>) {
        let n = self.adj.len();
        let mut dist = vec![None; n];
        let mut pred = vec![None; n];
        dist[s] = Some(0);
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some(du) = dist[u] else { continue };
                for &e in &self.adj[u] {
                    let v = self.head[e];
                    if self.cap[e] > 0 && dist[v].is_none_or(|dv| du + self.cost[e] < dv) {
                        dist[v] = Some(du + self.cost[e]);
                        pred[v] = Some(e);
                        changed = true;
                    }
                }
                for &(a, b) in extra {
                    if a == u && dist[b].is_none_or(|db| du < db) {
                        dist[b] = Some(du);
                        pred[b] = None;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (dist, pred)
    }
}

/// Greene-Kleitman for `ell`: a chain family minimizing
/// `ell |C| + |S - union C|` by min-cost flow (each chain pays `ell`, each
/// covered element earns one), and `ell` disjoint antichains read off the
/// optimal potentials `a(x) = -p(x')`, `b(x) = -p(x'')` as
/// `A_i = {x : a(x) = i - 1 < b(x)}`.
pub fn greene_kleitman(poset: &Poset, ell: usize) -> Result<GkCertificate> {
    if ell == 0 {
        return Err(Error::InvalidInput("ell must be positive".into()));
    }
    let n = poset.len();
    let big = n as i64 + 1;
    let (s, t) = (0, 1);
    let inn = |x: usize| 2 + 2 * x;
    let out = |x: usize| 3 + 2 * x;
    let mut net = Net { head: Vec::new(), cap: Vec::new(), cost: Vec::new(), adj: vec![Vec::new(); 2 * n + 2] };
    for x in 0..n {
        net.add(s, inn(x), big, 0);
        net.add(inn(x), out(x), 1, -1);
        net.add(out(x), t, big, ell as i64);
    }
    for (x, y) in poset.relations() {
        net.add(out(x), inn(y), big, 0);
    }
    let mut chains = 0;
    loop {
        let (dist, pred) = net.distances(s, &[]);
        match dist[t] {
            Some(d) if d < 0 => {}
            _ => break,
        }
        let mut v = t;
        while let Some(e) = pred[v] {
            net.cap[e] -= 1;
            net.cap[e ^ 1] += 1;
            v = net.head[e ^ 1];
        }
        chains += 1;
    }
    let mut extra = vec![(t, s)];
    if chains > 0 {
        extra.push((s, t));
    }
    let (pot, _) = net.distances(s, &extra);
    let a = |x: usize| -pot[inn(x)].expect("every node is reachable from the source");
    let b = |x: usize| -pot[out(x)].expect("every node is reachable from the source");
    let antichains: Vec<Vec<usize>> = (0..ell as i64)
        .map(|i| (0..n).filter(|&x| a(x) == i && b(x) > i).collect())
        .collect();

    // Flow leaving `s` starts a chain; follow saturated edges downward.
    let used = |e: usize| net.cap[e ^ 1] > 0;
    let mut rest: Vec<i64> = (0..net.head.len()).map(|e| if e % 2 == 0 { net.cap[e ^ 1] } else { 0 }).collect();
    let mut chain_list = Vec::new();
    for &e0 in &net.adj[s] {
        while e0 % 2 == 0 && rest[e0] > 0 {
            rest[e0] -= 1;
            let mut chain = Vec::new();
            let mut v = net.head[e0];
            while v != t {
                if v >= 2 && v.is_multiple_of(2) {
                    chain.push((v - 2) / 2);
                }
                let e = *net.adj[v]
                    .iter()
                    .find(|&&e| e % 2 == 0 && used(e) && rest[e] > 0)
                    .expect("flow is conserved");
                rest[e] -= 1;
                v = net.head[e];
            }
            chain_list.push(chain);
        }
    }
    let value = antichains.iter().map(|a| a.len() as i64).sum();
    Ok(GkCertificate { ell, antichains, chains: chain_list, value })
}

/// Weighted Greene-Kleitman by replacing each element `x` with `w(x)`
/// pairwise incomparable copies. Fails when the copies exceed `max_copies`.
pub fn weighted_greene_kleitman<T: Weight>(poset: &Poset, w: &[T], ell: usize, max_copies: usize) -> Result<GkCertificate> {
    if w.len() != poset.len() || w.iter().any(|&v| v < T::zero()) {
        return Err(Error::InvalidInput("w must give a nonnegative value per element".into()));
    }
    let counts: Vec<usize> = w.iter().map(|v| v.to_usize().unwrap_or(usize::MAX)).collect();
    let total = counts.iter().try_fold(0usize, |acc, &c| acc.checked_add(c)).unwrap_or(usize::MAX);
    if total > max_copies {
        return Err(Error::ResourceBound { what: "element copies", limit: max_copies, actual: total });
    }
    let owner: Vec<usize> = counts.iter().enumerate().flat_map(|(x, &c)| std::iter::repeat_n(x, c)).collect();
    let pairs: Vec<(usize, usize)> = (0..owner.len())
        .flat_map(|i| (0..owner.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| poset.greater(owner[i], owner[j]))
        .collect();
    let big = Poset::from_relation(owner.len(), pairs)?;
    let lifted = greene_kleitman(&big, ell)?;
    let mut seen = vec![false; poset.len()];
    let antichains: Vec<Vec<usize>> = lifted
        .antichains
        .iter()
        .map(|a| {
            let mut out: Vec<usize> = a.iter().map(|&i| owner[i]).filter(|&x| !std::mem::replace(&mut seen[x], true)).collect();
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    let chains = lifted.chains.iter().map(|c| c.iter().map(|&i| owner[i]).collect()).collect();
    let value = (0..poset.len()).filter(|&x| seen[x]).map(|x| counts[x] as i64).sum();
    Ok(GkCertificate { ell, antichains, chains, value })
}
