use super::gale_shapley::gale_shapley_on;
use super::{gale_shapley, is_stable, EdgeId, Matching, PreferenceSystem, Proposers};
use crate::error::{Error, Result};

/// A system reduced so that every stable matching is perfect, together with
/// the data derived from it: the stable edges, the two extreme stable
/// matchings and, per stable edge `e`, the girl-best stable matching `M_e`
/// containing `e`.
#[derive(Clone, Debug)]
pub struct CoreSystem {
    system: PreferenceSystem,
    input_edges: Vec<EdgeId>,
    input_edge_count: usize,
    stable: Vec<bool>,
    stable_edges: Vec<EdgeId>,
    girl_best: Matching,
    boy_best: Matching,
    girl_best_with: Vec<Option<Matching>>,
}

/// Repeats "for the best edge `st` at a node `s`, delete the edges at `t`
/// worse than `st`" until nothing changes, then drops isolated nodes.
pub fn reduce_to_core(system: &PreferenceSystem) -> CoreSystem {
    let mut alive = vec![true; system.edge_count()];
    loop {
        let mut changed = false;
        for u in 0..system.boys().len() {
            if let Some(&e) = system.boy_prefs(u).iter().find(|e| alive[e.0]) {
                let w = system.edge(e).girl;
                for &f in &system.girl_prefs(w)[system.girl_rank(e) + 1..] {
                    changed |= std::mem::replace(&mut alive[f.0], false);
                }
            }
        }
        for w in 0..system.girls().len() {
            if let Some(&e) = system.girl_prefs(w).iter().find(|e| alive[e.0]) {
                let u = system.edge(e).boy;
                for &f in &system.boy_prefs(u)[system.boy_rank(e) + 1..] {
                    changed |= std::mem::replace(&mut alive[f.0], false);
                }
            }
        }
        if !changed {
            break;
        }
    }
    let (core, input_edges) = system.restrict(&alive);
    CoreSystem::from_reduced(core, input_edges, system.edge_count())
}

impl CoreSystem {
    fn from_reduced(system: PreferenceSystem, input_edges: Vec<EdgeId>, input_edge_count: usize) -> Self {
        let girl_best = gale_shapley(&system, Proposers::Girls);
        let boy_best = gale_shapley(&system, Proposers::Boys);
        let girl_best_with: Vec<Option<Matching>> = system
            .edge_ids()
            .map(|e| extend_raw(&system, &std::iter::once(e).collect()))
            .collect();
        let stable: Vec<bool> = girl_best_with.iter().map(Option::is_some).collect();
        let stable_edges = system.edge_ids().filter(|e| stable[e.0]).collect();
        CoreSystem { system, input_edges, input_edge_count, stable, stable_edges, girl_best, boy_best, girl_best_with }
    }

    pub fn system(&self) -> &PreferenceSystem {
        &self.system
    }

    /// Number of girls, which is also the size of every stable matching.
    pub fn n(&self) -> usize {
        self.system.girls().len()
    }

    pub fn stable_edges(&self) -> &[EdgeId] {
        &self.stable_edges
    }

    pub fn is_stable_edge(&self, e: EdgeId) -> bool {
        self.stable.get(e.0).copied().unwrap_or(false)
    }

    pub fn girl_best(&self) -> &Matching {
        &self.girl_best
    }

    pub fn boy_best(&self) -> &Matching {
        &self.boy_best
    }

    /// The girl-best stable matching containing the stable edge `e`.
    pub fn girl_best_with(&self, e: EdgeId) -> Option<&Matching> {
        self.girl_best_with.get(e.0).and_then(Option::as_ref)
    }

    /// Input edge id of a core edge.
    pub fn input_edge(&self, e: EdgeId) -> EdgeId {
        self.input_edges[e.0]
    }

    /// Core edge id of an input edge, if the reduction kept it.
    pub fn core_edge(&self, input: EdgeId) -> Option<EdgeId> {
        self.input_edges.binary_search(&input).ok().map(EdgeId)
    }

    /// Input edges deleted by the reduction.
    pub fn removed_input_edges(&self) -> Vec<EdgeId> {
        (0..self.input_edge_count)
            .map(EdgeId)
            .filter(|e| self.input_edges.binary_search(e).is_err())
            .collect()
    }

    pub fn to_input(&self, m: &Matching) -> Matching {
        m.iter().map(|e| self.input_edge(e)).collect()
    }

    /// Translates a matching of the input system, or `None` if it uses an
    /// edge the reduction deleted.
    pub fn from_input(&self, m: &Matching) -> Option<Matching> {
        m.iter().map(|e| self.core_edge(e)).collect()
    }

    pub fn is_stable(&self, m: &Matching) -> Result<bool> {
        is_stable(&self.system, m)
    }

    fn require_stable(&self, m: &Matching) -> Result<()> {
        if is_stable(&self.system, m)? {
            Ok(())
        } else {
            Err(Error::NotStable)
        }
    }

    /// The girl-best stable matching containing `m`, or `None` if no stable
    /// matching contains it.
    pub fn extend_to_stable(&self, m: &Matching) -> Result<Option<Matching>> {
        self.system.check_matching(m)?;
        Ok(extend_raw(&self.system, m))
    }

    /// The girl-best edges of `a` and `b` (equivalently, the boy-worst).
    pub fn meet(&self, a: &Matching, b: &Matching) -> Result<Matching> {
        self.pick(a, b, |x, y| x < y)
    }

    /// The girl-worst edges of `a` and `b` (equivalently, the boy-best).
    pub fn join(&self, a: &Matching, b: &Matching) -> Result<Matching> {
        self.pick(a, b, |x, y| x > y)
    }

    fn pick(&self, a: &Matching, b: &Matching, first_wins: impl Fn(usize, usize) -> bool) -> Result<Matching> {
        self.require_stable(a)?;
        self.require_stable(b)?;
        let mut at_girl = vec![None; self.n()];
        for e in b.iter() {
            at_girl[self.system.edge(e).girl] = Some(e);
        }
        Ok(a.iter()
            .map(|e| {
                let f = at_girl[self.system.edge(e).girl].expect("stable matchings of a core are perfect");
                if e == f || first_wins(self.system.girl_rank(e), self.system.girl_rank(f)) {
                    e
                } else {
                    f
                }
            })
            .collect())
    }
}

/// Claim: with `G'` the system minus `m` and minus every edge `m` dominates,
/// the girls-proposing matching `M'` of `G'` is such that `m + M'` is the
/// girl-best stable matching containing `m` whenever it is a matching at all.
fn extend_raw(system: &PreferenceSystem, m: &Matching) -> Option<Matching> {
    let mut at_boy = vec![None; system.boys().len()];
    let mut at_girl = vec![None; system.girls().len()];
    for e in m.iter() {
        at_boy[system.edge(e).boy] = Some(e);
        at_girl[system.edge(e).girl] = Some(e);
    }
    let allowed: Vec<bool> = system
        .edge_ids()
        .map(|f| {
            if m.contains(f) {
                return false;
            }
            let edge = system.edge(f);
            let by_boy = at_boy[edge.boy].is_some_and(|e: EdgeId| system.boy_rank(e) < system.boy_rank(f));
            let by_girl = at_girl[edge.girl].is_some_and(|e: EdgeId| system.girl_rank(e) < system.girl_rank(f));
            !(by_boy || by_girl)
        })
        .collect();
    let rest = gale_shapley_on(system, Proposers::Girls, Some(&allowed));
    for e in rest.iter() {
        let edge = system.edge(e);
        if at_boy[edge.boy].is_some() || at_girl[edge.girl].is_some() {
            return None;
        }
    }
    let mut out = m.clone();
    for e in rest.iter() {
        out.insert(e);
    }
    debug_assert!(super::blocking_edge(system, &out).is_none());
    Some(out)
}
