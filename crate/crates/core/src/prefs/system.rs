use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Index of an edge inside one [`PreferenceSystem`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    pub boy: usize,
    pub girl: usize,
}

/// A bipartite graph (parallel edges allowed) with a strict preference order
/// over the incident edges of every node. Lists are stored best first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreferenceSystem {
    boys: Vec<String>,
    girls: Vec<String>,
    edges: Vec<Edge>,
    boy_prefs: Vec<Vec<EdgeId>>,
    girl_prefs: Vec<Vec<EdgeId>>,
    boy_rank: Vec<usize>,
    girl_rank: Vec<usize>,
    edge_index: HashMap<String, EdgeId>,
}

impl PreferenceSystem {
    /// Builds and validates a system. Every edge must appear exactly once in
    /// the list of its boy and exactly once in the list of its girl.
    pub fn new(
        boys: Vec<String>,
        girls: Vec<String>,
        edges: Vec<Edge>,
        boy_prefs: Vec<Vec<EdgeId>>,
        girl_prefs: Vec<Vec<EdgeId>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSystem(msg));
        if boy_prefs.len() != boys.len() || girl_prefs.len() != girls.len() {
            return bad("one preference list per node is required".into());
        }
        let mut names = BTreeSet::new();
        for name in boys.iter().chain(girls.iter()) {
            if !names.insert(name.as_str()) {
                return bad(format!("duplicate node id `{name}`"));
            }
        }
        let mut edge_index = HashMap::new();
        for (i, e) in edges.iter().enumerate() {
            if e.boy >= boys.len() || e.girl >= girls.len() {
                return bad(format!("edge `{}` has an unknown endpoint", e.name));
            }
            if edge_index.insert(e.name.clone(), EdgeId(i)).is_some() {
                return bad(format!("duplicate edge id `{}`", e.name));
            }
        }
        let mut boy_rank = vec![usize::MAX; edges.len()];
        let mut girl_rank = vec![usize::MAX; edges.len()];
        for (u, list) in boy_prefs.iter().enumerate() {
            for (r, &e) in list.iter().enumerate() {
                match edges.get(e.0) {
                    Some(edge) if edge.boy == u => {}
                    _ => return bad(format!("boy `{}` lists a non-incident edge", boys[u])),
                }
                if boy_rank[e.0] != usize::MAX {
                    return bad(format!("edge `{}` listed twice by `{}`", edges[e.0].name, boys[u]));
                }
                boy_rank[e.0] = r;
            }
        }
        for (w, list) in girl_prefs.iter().enumerate() {
            for (r, &e) in list.iter().enumerate() {
                match edges.get(e.0) {
                    Some(edge) if edge.girl == w => {}
                    _ => return bad(format!("girl `{}` lists a non-incident edge", girls[w])),
                }
                if girl_rank[e.0] != usize::MAX {
                    return bad(format!("edge `{}` listed twice by `{}`", edges[e.0].name, girls[w]));
                }
                girl_rank[e.0] = r;
            }
        }
        if let Some(i) = (0..edges.len()).find(|&i| boy_rank[i] == usize::MAX || girl_rank[i] == usize::MAX) {
            return bad(format!("edge `{}` missing from a preference list", edges[i].name));
        }
        Ok(PreferenceSystem { boys, girls, edges, boy_prefs, girl_prefs, boy_rank, girl_rank, edge_index })
    }

    /// Builds a simple system (no parallel edges) from rankings given as
    /// partner indices, best first. Nodes are named `u1..`, `w1..` and the
    /// edge joining `u_i` and `w_j` is named `u{i}w{j}`; edges are numbered
    /// by boy, then girl. A pair is an edge iff both sides rank each other.
    pub fn from_rankings(boy_lists: &[Vec<usize>], girl_lists: &[Vec<usize>]) -> Result<Self> {
        let boys: Vec<String> = (1..=boy_lists.len()).map(|i| format!("u{i}")).collect();
        let girls: Vec<String> = (1..=girl_lists.len()).map(|j| format!("w{j}")).collect();
        let mut pairs = BTreeSet::new();
        for (u, list) in boy_lists.iter().enumerate() {
            for &w in list {
                if w >= girl_lists.len() {
                    return Err(Error::InvalidSystem(format!("boy u{} ranks unknown girl", u + 1)));
                }
                pairs.insert((u, w));
            }
        }
        let girl_pairs: BTreeSet<(usize, usize)> = girl_lists
            .iter()
            .enumerate()
            .flat_map(|(w, list)| list.iter().map(move |&u| (u, w)))
            .collect();
        if pairs != girl_pairs {
            return Err(Error::InvalidSystem("rankings are not mutual".into()));
        }
        let index: HashMap<(usize, usize), EdgeId> =
            pairs.iter().enumerate().map(|(i, &p)| (p, EdgeId(i))).collect();
        let edges = pairs
            .iter()
            .map(|&(u, w)| Edge { name: format!("u{}w{}", u + 1, w + 1), boy: u, girl: w })
            .collect();
        let boy_prefs = boy_lists
            .iter()
            .enumerate()
            .map(|(u, list)| list.iter().map(|&w| index[&(u, w)]).collect())
            .collect();
        let girl_prefs = girl_lists
            .iter()
            .enumerate()
            .map(|(w, list)| list.iter().map(|&u| index[&(u, w)]).collect())
            .collect();
        PreferenceSystem::new(boys, girls, edges, boy_prefs, girl_prefs)
    }

    pub fn boys(&self) -> &[String] {
        &self.boys
    }

    pub fn girls(&self) -> &[String] {
        &self.girls
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn boy_prefs(&self, u: usize) -> &[EdgeId] {
        &self.boy_prefs[u]
    }

    pub fn girl_prefs(&self, w: usize) -> &[EdgeId] {
        &self.girl_prefs[w]
    }

    /// Position of `e` in its boy's list, 0 being best.
    pub fn boy_rank(&self, e: EdgeId) -> usize {
        self.boy_rank[e.0]
    }

    /// Position of `e` in its girl's list, 0 being best.
    pub fn girl_rank(&self, e: EdgeId) -> usize {
        self.girl_rank[e.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    /// Checks that `m` is a set of existing edges, pairwise node-disjoint.
    pub fn check_matching(&self, m: &Matching) -> Result<()> {
        let mut boy_used = vec![false; self.boys.len()];
        let mut girl_used = vec![false; self.girls.len()];
        for e in m.iter() {
            let Some(edge) = self.edges.get(e.0) else {
                return Err(Error::NotAMatching(format!("unknown edge {e}")));
            };
            if std::mem::replace(&mut boy_used[edge.boy], true) {
                return Err(Error::NotAMatching(format!("boy `{}` covered twice", self.boys[edge.boy])));
            }
            if std::mem::replace(&mut girl_used[edge.girl], true) {
                return Err(Error::NotAMatching(format!("girl `{}` covered twice", self.girls[edge.girl])));
            }
        }
        Ok(())
    }

    /// The subsystem keeping the edges with `keep[e]` and dropping nodes left
    /// without edges. Returns the subsystem and, per new edge, its old id.
    pub fn restrict(&self, keep: &[bool]) -> (PreferenceSystem, Vec<EdgeId>) {
        let old_ids: Vec<EdgeId> = self.edge_ids().filter(|e| keep[e.0]).collect();
        let mut new_id = vec![None; self.edges.len()];
        for (i, e) in old_ids.iter().enumerate() {
            new_id[e.0] = Some(EdgeId(i));
        }
        let mut boy_map = vec![None; self.boys.len()];
        let mut girl_map = vec![None; self.girls.len()];
        let mut boys = Vec::new();
        let mut girls = Vec::new();
        let mut boy_prefs = Vec::new();
        let mut girl_prefs = Vec::new();
        for (u, list) in self.boy_prefs.iter().enumerate() {
            let kept: Vec<EdgeId> = list.iter().filter_map(|e| new_id[e.0]).collect();
            if !kept.is_empty() {
                boy_map[u] = Some(boys.len());
                boys.push(self.boys[u].clone());
                boy_prefs.push(kept);
            }
        }
        for (w, list) in self.girl_prefs.iter().enumerate() {
            let kept: Vec<EdgeId> = list.iter().filter_map(|e| new_id[e.0]).collect();
            if !kept.is_empty() {
                girl_map[w] = Some(girls.len());
                girls.push(self.girls[w].clone());
                girl_prefs.push(kept);
            }
        }
        let edges = old_ids
            .iter()
            .map(|e| {
                let old = &self.edges[e.0];
                Edge {
                    name: old.name.clone(),
                    boy: boy_map[old.boy].expect("kept edge has a kept boy"),
                    girl: girl_map[old.girl].expect("kept edge has a kept girl"),
                }
            })
            .collect();
        let sub = PreferenceSystem::new(boys, girls, edges, boy_prefs, girl_prefs)
            .expect("restriction of a valid system is valid");
        (sub, old_ids)
    }
}

/// A set of edges, kept sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching(BTreeSet<EdgeId>);

impl Matching {
    pub fn new() -> Self {
        Matching(BTreeSet::new())
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.0.insert(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &Matching) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Edge names joined by commas, in id order.
    pub fn names(&self, system: &PreferenceSystem) -> Vec<String> {
        self.iter().map(|e| system.edge_name(e).to_string()).collect()
    }
}

impl FromIterator<EdgeId> for Matching {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        Matching(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Matching {
    type Item = EdgeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, EdgeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}
