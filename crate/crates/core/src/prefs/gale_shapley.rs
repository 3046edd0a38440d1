use std::collections::VecDeque;

use super::{EdgeId, Matching, PreferenceSystem};
use crate::error::Result;

/// Which side makes the proposals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Proposers {
    Boys,
    Girls,
}

/// The proposer-optimal stable matching. Free proposers are served in index
/// order, so the run is deterministic.
pub fn gale_shapley(system: &PreferenceSystem, side: Proposers) -> Matching {
    gale_shapley_on(system, side, None)
}

/// Gale-Shapley on the subsystem of edges with `allowed[e]`.
pub(crate) fn gale_shapley_on(
    system: &PreferenceSystem,
    side: Proposers,
    allowed: Option<&[bool]>,
) -> Matching {
    let (n_prop, n_recv) = match side {
        Proposers::Boys => (system.boys().len(), system.girls().len()),
        Proposers::Girls => (system.girls().len(), system.boys().len()),
    };
    let list = |p: usize| match side {
        Proposers::Boys => system.boy_prefs(p),
        Proposers::Girls => system.girl_prefs(p),
    };
    let receiver = |e: EdgeId| match side {
        Proposers::Boys => system.edge(e).girl,
        Proposers::Girls => system.edge(e).boy,
    };
    let proposer = |e: EdgeId| match side {
        Proposers::Boys => system.edge(e).boy,
        Proposers::Girls => system.edge(e).girl,
    };
    let recv_rank = |e: EdgeId| match side {
        Proposers::Boys => system.girl_rank(e),
        Proposers::Girls => system.boy_rank(e),
    };
    let ok = |e: EdgeId| allowed.is_none_or(|a| a[e.0]);

    let mut next = vec![0usize; n_prop];
    let mut held: Vec<Option<EdgeId>> = vec![None; n_recv];
    let mut free: VecDeque<usize> = (0..n_prop).collect();
    while let Some(p) = free.pop_front() {
        let prefs = list(p);
        while next[p] < prefs.len() {
            let e = prefs[next[p]];
            next[p] += 1;
            if !ok(e) {
                continue;
            }
            let r = receiver(e);
            match held[r] {
                None => {
                    held[r] = Some(e);
                    break;
                }
                Some(cur) if recv_rank(e) < recv_rank(cur) => {
                    held[r] = Some(e);
                    free.push_back(proposer(cur));
                    break;
                }
                Some(_) => {}
            }
        }
    }
    held.into_iter().flatten().collect()
}

/// True iff `m` is a matching that dominates every other edge.
pub fn is_stable(system: &PreferenceSystem, m: &Matching) -> Result<bool> {
    system.check_matching(m)?;
    Ok(blocking_edge(system, m).is_none())
}

/// Some edge not dominated by the matching `m`, if one exists.
pub fn blocking_edge(system: &PreferenceSystem, m: &Matching) -> Option<EdgeId> {
    let mut at_boy = vec![None; system.boys().len()];
    let mut at_girl = vec![None; system.girls().len()];
    for e in m.iter() {
        at_boy[system.edge(e).boy] = Some(e);
        at_girl[system.edge(e).girl] = Some(e);
    }
    system.edge_ids().find(|&f| {
        if m.contains(f) {
            return false;
        }
        let edge = system.edge(f);
        let boy_ok = at_boy[edge.boy].is_some_and(|e| system.boy_rank(e) < system.boy_rank(f));
        let girl_ok = at_girl[edge.girl].is_some_and(|e| system.girl_rank(e) < system.girl_rank(f));
        !(boy_ok || girl_ok)
    })
}
