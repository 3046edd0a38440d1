//! Maximum flow, Dijkstra, (0,1)-cost primal-dual flow, bipartite
//! b-matching and path decomposition over exact integer scalars.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::ringset::NodeSet;
use crate::scalar::{Capacity, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc<T> {
    pub tail: usize,
    pub head: usize,
    pub cap: Capacity<T>,
    pub cost: T,
}

/// A digraph with a source, a sink, capacities and costs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowNetwork<T> {
    n: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc<T>>,
}

impl<T: Weight> FlowNetwork<T> {
    pub fn new(n: usize, source: usize, sink: usize) -> Self {
        assert!(source < n && sink < n && source != sink);
        FlowNetwork { n, source, sink, arcs: Vec::new() }
    }

    /// Adds an arc and returns its index.
    pub fn add_arc(&mut self, tail: usize, head: usize, cap: Capacity<T>, cost: T) -> usize {
        assert!(tail < self.n && head < self.n);
        self.arcs.push(Arc { tail, head, cap, cost });
        self.arcs.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc<T>] {
        &self.arcs
    }

    pub fn arc(&self, i: usize) -> &Arc<T> {
        &self.arcs[i]
    }

    pub fn leaves(&self, i: usize, z: &NodeSet) -> bool {
        let a = &self.arcs[i];
        z.contains(a.tail) && !z.contains(a.head)
    }

    /// Total capacity of the arcs leaving `z`.
    pub fn cut_capacity(&self, z: &NodeSet) -> Result<Capacity<T>> {
        let mut total = T::zero();
        for (i, a) in self.arcs.iter().enumerate() {
            if self.leaves(i, z) {
                match a.cap {
                    Capacity::Infinite => return Ok(Capacity::Infinite),
                    Capacity::Finite(v) => total = total.checked_add(&v).ok_or(Error::Overflow)?,
                }
            }
        }
        Ok(Capacity::Finite(total))
    }

    /// Net outflow of `flow` at node `v`.
    pub fn net_outflow(&self, flow: &[T], v: usize) -> T {
        let mut out = T::zero();
        for (a, &f) in self.arcs.iter().zip(flow) {
            if a.tail == v {
                out = out + f;
            }
            if a.head == v {
                out = out - f;
            }
        }
        out
    }

    /// Checks `0 <= flow <= cap` and conservation away from source and sink.
    pub fn check_flow(&self, flow: &[T]) -> Result<()> {
        if flow.len() != self.arcs.len() {
            return Err(Error::InvalidInput("flow length differs from arc count".into()));
        }
        let mut excess = vec![T::zero(); self.n];
        for (a, &f) in self.arcs.iter().zip(flow) {
            if f < T::zero() || a.cap.finite().is_some_and(|c| f > c) {
                return Err(Error::InvalidInput(format!("arc {}->{} violates its capacity", a.tail, a.head)));
            }
            excess[a.tail] = excess[a.tail] - f;
            excess[a.head] = excess[a.head] + f;
        }
        match (0..self.n).find(|&v| v != self.source && v != self.sink && excess[v] != T::zero()) {
            Some(v) => Err(Error::InvalidInput(format!("flow is not conserved at node {v}"))),
            None => Ok(()),
        }
    }
}

/// Residual graph: edge `2i` is arc `i` forward, `2i + 1` its reverse.
#[derive(Clone, Debug)]
pub(crate) struct Residual<T> {
    n: usize,
    head: Vec<usize>,
    cap: Vec<Capacity<T>>,
    adj: Vec<Vec<usize>>,
}

impl<T: Weight> Residual<T> {
    pub(crate) fn new(net: &FlowNetwork<T>) -> Self {
        let mut head = Vec::with_capacity(2 * net.arcs.len());
        let mut cap = Vec::with_capacity(2 * net.arcs.len());
        let mut adj = vec![Vec::new(); net.n];
        for (i, a) in net.arcs.iter().enumerate() {
            head.push(a.head);
            cap.push(a.cap);
            adj[a.tail].push(2 * i);
            head.push(a.tail);
            cap.push(Capacity::Finite(T::zero()));
            adj[a.head].push(2 * i + 1);
        }
        Residual { n: net.n, head, cap, adj }
    }

    pub(crate) fn flow(&self) -> Vec<T> {
        (0..self.head.len() / 2).map(|i| self.cap[2 * i + 1].finite().expect("reverse capacity is finite")).collect()
    }

    fn usable(&self, e: usize, mask: Option<&[bool]>) -> bool {
        self.cap[e].is_positive() && mask.is_none_or(|m| m[e])
    }

    /// Nodes reachable from `from` along usable residual edges.
    pub(crate) fn reach(&self, from: &[usize], mask: Option<&[bool]>) -> FixedBitSet {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut queue = VecDeque::new();
        for &s in from {
            if !seen.put(s) {
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.usable(e, mask) && !seen.put(v) {
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    /// Residual arcs with positive capacity, as node pairs.
    pub(crate) fn positive_arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.adj[u].iter().filter(|&&e| self.cap[e].is_positive()).map(move |&e| (u, self.head[e])))
            .collect()
    }

    fn infinite_path(&self, s: usize, t: usize, mask: Option<&[bool]>) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut stack = vec![s];
        seen.insert(s);
        while let Some(u) = stack.pop() {
            if u == t {
                return true;
            }
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] == Capacity::Infinite && mask.is_none_or(|m| m[e]) && !seen.put(v) {
                    stack.push(v);
                }
            }
        }
        false
    }

    /// Dinic's algorithm restricted to the edges allowed by `mask`. Fails
    /// with `Unbounded` when an infinite-capacity path exists.
    pub(crate) fn augment(&mut self, s: usize, t: usize, mask: Option<&[bool]>) -> Result<T> {
        if self.infinite_path(s, t, mask) {
            return Err(Error::Unbounded);
        }
        let mut total = T::zero();
        loop {
            let mut level = vec![usize::MAX; self.n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.head[e];
                    if self.usable(e, mask) && level[v] == usize::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[t] == usize::MAX {
                return Ok(total);
            }
            let mut it = vec![0usize; self.n];
            loop {
                let pushed = self.dfs(s, t, Capacity::Infinite, &level, &mut it, mask);
                if pushed == T::zero() {
                    break;
                }
                total = total.checked_add(&pushed).ok_or(Error::Overflow)?;
            }
        }
    }

    fn dfs(
        &mut self,
        u: usize,
        t: usize,
        limit: Capacity<T>,
        level: &[usize],
        it: &mut [usize],
        mask: Option<&[bool]>,
    ) -> T {
        if u == t {
            return limit.finite().expect("an augmenting path has a finite bottleneck");
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let v = self.head[e];
            if self.usable(e, mask) && level[v] == level[u] + 1 {
                let pushed = self.dfs(v, t, limit.min_with(self.cap[e]), level, it, mask);
                if pushed > T::zero() {
                    self.cap[e] = self.cap[e].sub(pushed);
                    self.cap[e ^ 1] = self.cap[e ^ 1].add(pushed);
                    return pushed;
                }
            }
            it[u] += 1;
        }
        T::zero()
    }
}

#[derive(Clone, Debug)]
pub struct MaxFlow<T> {
    pub flow: Vec<T>,
    pub value: T,
    /// The smallest source side of a minimum cut: nodes reachable from the
    /// source in the final residual graph.
    pub min_cut: NodeSet,
    residual: Residual<T>,
}

impl<T: Weight> MaxFlow<T> {
    /// Nodes reachable from `u` in the final residual graph.
    pub fn residual_reach(&self, u: usize) -> NodeSet {
        self.residual.reach(&[u], None)
    }

    /// Residual arcs with positive capacity.
    pub fn residual_arcs(&self) -> Vec<(usize, usize)> {
        self.residual.positive_arcs()
    }
}

/// A maximum flow; `Unbounded` if every cut has infinite capacity.
pub fn max_flow<T: Weight>(net: &FlowNetwork<T>) -> Result<MaxFlow<T>> {
    let mut residual = Residual::new(net);
    let value = residual.augment(net.source, net.sink, None)?;
    let min_cut = residual.reach(&[net.source], None);
    Ok(MaxFlow { flow: residual.flow(), value, min_cut, residual })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestPaths<T> {
    pub dist: Vec<Option<T>>,
    /// Arc into each reached node on its shortest-path tree.
    pub pred: Vec<Option<usize>>,
}

impl<T: Weight> ShortestPaths<T> {
    /// Arc indices of the tree path from the source to `v`.
    pub fn path_to(&self, net: &FlowNetwork<T>, mut v: usize) -> Option<Vec<usize>> {
        self.dist[v]?;
        let mut arcs = Vec::new();
        while let Some(a) = self.pred[v] {
            arcs.push(a);
            v = net.arcs[a].tail;
        }
        arcs.reverse();
        Some(arcs)
    }
}

/// Dijkstra from the source using arc costs, which must be nonnegative.
pub fn shortest_paths<T: Weight>(net: &FlowNetwork<T>) -> Result<ShortestPaths<T>> {
    if net.arcs.iter().any(|a| a.cost < T::zero()) {
        return Err(Error::InvalidInput("negative arc cost".into()));
    }
    let mut out_arcs = vec![Vec::new(); net.n];
    for (i, a) in net.arcs.iter().enumerate() {
        out_arcs[a.tail].push(i);
    }
    let mut dist: Vec<Option<T>> = vec![None; net.n];
    let mut pred = vec![None; net.n];
    let mut done = vec![false; net.n];
    let mut heap = BinaryHeap::new();
    dist[net.source] = Some(T::zero());
    heap.push(Reverse((T::zero(), net.source)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &i in &out_arcs[u] {
            let v = net.arcs[i].head;
            let nd = d.checked_add(&net.arcs[i].cost).ok_or(Error::Overflow)?;
            if dist[v].is_none_or(|old| nd < old) {
                dist[v] = Some(nd);
                pred[v] = Some(i);
                heap.push(Reverse((nd, v)));
            }
        }
    }
    Ok(ShortestPaths { dist, pred })
}

#[derive(Clone, Debug)]
pub struct UnitCostFlow<T> {
    pub flow: Vec<T>,
    pub potential: Vec<T>,
    pub amount: T,
}

/// Primal-dual min-cost flow for arc costs in {0, 1}, run until the sink
/// potential reaches `ell`, with a final flow phase at that potential when it
/// is bounded. The result satisfies: `cost > dpot` implies zero flow and
/// `cost < dpot` implies a saturated arc.
pub fn min_cost_flow_unit_costs<T: Weight>(net: &FlowNetwork<T>, ell: usize) -> Result<UnitCostFlow<T>> {
    primal_dual(net, ell, true)
}

pub(crate) fn primal_dual<T: Weight>(net: &FlowNetwork<T>, ell: usize, final_phase: bool) -> Result<UnitCostFlow<T>> {
    if net.arcs.iter().any(|a| a.cost != T::zero() && a.cost != T::one()) {
        return Err(Error::InvalidInput("arc costs must be 0 or 1".into()));
    }
    let (s, t) = (net.source, net.sink);
    let target: T = crate::scalar::from_usize(ell);
    let mut residual = Residual::new(net);
    let mut pot = vec![T::zero(); net.n];
    loop {
        if pot[t] == target && !final_phase {
            break;
        }
        let mask = admissible(net, &pot);
        match residual.augment(s, t, Some(&mask)) {
            Ok(_) => {}
            Err(Error::Unbounded) if pot[t] == target => break,
            Err(Error::Unbounded) => {
                return Err(Error::NoFiniteLCut { ell, reached: pot[t].to_usize().unwrap_or(0) })
            }
            Err(e) => return Err(e),
        }
        if pot[t] == target {
            break;
        }
        let reached = residual.reach(&[s], Some(&mask));
        for v in 0..net.n {
            if !reached.contains(v) {
                pot[v] = pot[v] + T::one();
            }
        }
    }
    let flow = residual.flow();
    let amount = net.net_outflow(&flow, s);
    Ok(UnitCostFlow { flow, potential: pot, amount })
}

fn admissible<T: Weight>(net: &FlowNetwork<T>, pot: &[T]) -> Vec<bool> {
    net.arcs
        .iter()
        .flat_map(|a| {
            let tight = a.cost == pot[a.head] - pot[a.tail];
            [tight, tight]
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct BMatching<T> {
    /// Value per input edge.
    pub z: Vec<T>,
    pub value: T,
    /// A minimum-weight cover of the edges by nodes.
    pub cover_left: Vec<bool>,
    pub cover_right: Vec<bool>,
}

/// Maximum b-matching of a bipartite graph via max flow, followed by cycle
/// canceling so that the edges with positive value form a forest.
pub fn b_matching_max<T: Weight>(
    b_left: &[T],
    b_right: &[T],
    edges: &[(usize, usize)],
) -> Result<BMatching<T>> {
    let (nl, nr) = (b_left.len(), b_right.len());
    let (s, t) = (0, nl + nr + 1);
    let mut net = FlowNetwork::new(nl + nr + 2, s, t);
    for (l, &b) in b_left.iter().enumerate() {
        net.add_arc(s, 1 + l, Capacity::Finite(b), T::zero());
    }
    for (r, &b) in b_right.iter().enumerate() {
        net.add_arc(1 + nl + r, t, Capacity::Finite(b), T::zero());
    }
    let first_edge = net.arcs.len();
    for &(l, r) in edges {
        if l >= nl || r >= nr {
            return Err(Error::InvalidInput("edge endpoint out of range".into()));
        }
        net.add_arc(1 + l, 1 + nl + r, Capacity::Infinite, T::zero());
    }
    let mf = max_flow(&net)?;
    let mut z = mf.flow[first_edge..].to_vec();
    cancel_cycles(nl, nr, edges, &mut z);
    Ok(BMatching {
        z,
        value: mf.value,
        cover_left: (0..nl).map(|l| !mf.min_cut.contains(1 + l)).collect(),
        cover_right: (0..nr).map(|r| mf.min_cut.contains(1 + nl + r)).collect(),
    })
}

fn cancel_cycles<T: Weight>(nl: usize, nr: usize, edges: &[(usize, usize)], z: &mut [T]) {
    let node = |i: usize, right: bool| if right { nl + i } else { i };
    'outer: loop {
        let mut forest: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nl + nr];
        let mut comp: Vec<usize> = (0..nl + nr).collect();
        fn find(comp: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while comp[r] != r {
                r = comp[r];
            }
            let mut y = x;
            while comp[y] != r {
                let next = comp[y];
                comp[y] = r;
                y = next;
            }
            r
        }
        for (i, &(l, r)) in edges.iter().enumerate() {
            if z[i] <= T::zero() {
                continue;
            }
            let (a, b) = (node(l, false), node(r, true));
            let (ra, rb) = (find(&mut comp, a), find(&mut comp, b));
            if ra != rb {
                comp[ra] = rb;
                forest[a].push((b, i));
                forest[b].push((a, i));
                continue;
            }
            // The tree path from b back to a closes an even cycle with edge i.
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; nl + nr];
            let mut queue = VecDeque::from([b]);
            let mut seen = vec![false; nl + nr];
            seen[b] = true;
            while let Some(u) = queue.pop_front() {
                for &(v, e) in &forest[u] {
                    if !seen[v] {
                        seen[v] = true;
                        prev[v] = Some((u, e));
                        queue.push_back(v);
                    }
                }
            }
            let mut cycle = vec![i];
            let mut v = a;
            let mut path = Vec::new();
            while let Some((u, e)) = prev[v] {
                path.push(e);
                v = u;
            }
            // `path` runs from a back to b; walking i then b..a keeps the cycle order.
            path.reverse();
            cycle.extend(path);
            let start = (0..cycle.len()).min_by_key(|&k| z[cycle[k]]).expect("cycle is nonempty");
            let alpha = z[cycle[start]];
            for k in 0..cycle.len() {
                let e = cycle[(start + k) % cycle.len()];
                z[e] = if k % 2 == 0 { z[e] - alpha } else { z[e] + alpha };
            }
            continue 'outer;
        }
        break;
    }
}

/// Splits an acyclic s-t flow into paths (as arc index lists) with
/// multiplicities summing to the flow on every arc.
pub fn decompose_into_path_flows<T: Weight>(net: &FlowNetwork<T>, flow: &[T]) -> Result<Vec<(Vec<usize>, T)>> {
    net.check_flow(flow)?;
    let mut rest = flow.to_vec();
    let mut out_arcs = vec![Vec::new(); net.n];
    for (i, a) in net.arcs.iter().enumerate() {
        out_arcs[a.tail].push(i);
    }
    let mut paths = Vec::new();
    loop {
        let mut path = Vec::new();
        let mut on_path = vec![false; net.n];
        let mut v = net.source;
        on_path[v] = true;
        while v != net.sink {
            let Some(&i) = out_arcs[v].iter().find(|&&i| rest[i] > T::zero()) else {
                break;
            };
            path.push(i);
            v = net.arcs[i].head;
            if std::mem::replace(&mut on_path[v], true) {
                return Err(Error::InvalidInput("flow contains a cycle".into()));
            }
        }
        if path.is_empty() {
            break;
        }
        if v != net.sink {
            return Err(Error::InvalidInput("flow path does not reach the sink".into()));
        }
        let amount = path.iter().map(|&i| rest[i]).min().expect("path is nonempty");
        for &i in &path {
            rest[i] = rest[i] - amount;
        }
        paths.push((path, amount));
    }
    if rest.iter().any(|&r| r != T::zero()) {
        return Err(Error::InvalidInput("flow contains a cycle".into()));
    }
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: i64) -> Capacity<i64> {
        Capacity::Finite(v)
    }

    #[test]
    fn two_parallel_paths() {
        let mut net = FlowNetwork::new(4, 0, 3);
        net.add_arc(0, 1, fin(1), 0);
        net.add_arc(1, 3, fin(1), 0);
        net.add_arc(0, 2, fin(1), 0);
        net.add_arc(2, 3, fin(1), 0);
        let mf = max_flow(&net).unwrap();
        assert_eq!(mf.value, 2);
        assert_eq!(mf.min_cut.ones().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn infinite_path_is_unbounded() {
        let mut net = FlowNetwork::<i64>::new(2, 0, 1);
        net.add_arc(0, 1, Capacity::Infinite, 0);
        assert_eq!(max_flow(&net).unwrap_err(), Error::Unbounded);
    }

    #[test]
    fn unit_costs_path_reaches_two() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, fin(1), 1);
        net.add_arc(1, 2, fin(1), 1);
        let r = min_cost_flow_unit_costs(&net, 2).unwrap();
        assert_eq!(r.potential[2], 2);
        assert_eq!(r.amount, 1);
    }

    #[test]
    fn single_edge_b_matching() {
        let bm = b_matching_max(&[2i64], &[3], &[(0, 0)]).unwrap();
        assert_eq!(bm.z, vec![2]);
        assert_eq!(bm.value, 2);
        assert_eq!(bm.cover_left, vec![true]);
    }

    #[test]
    fn cycle_canceling_leaves_a_forest() {
        let edges = [(0, 0), (0, 1), (1, 0), (1, 1)];
        let mut z = vec![1i64, 1, 1, 1];
        cancel_cycles(2, 2, &edges, &mut z);
        assert_eq!(z.iter().filter(|&&v| v > 0).count(), 2);
        assert_eq!(z.iter().sum::<i64>(), 4);
    }

    #[test]
    fn dijkstra_distances() {
        let mut net = FlowNetwork::new(3, 0, 2);
        net.add_arc(0, 1, fin(1), 2);
        net.add_arc(1, 2, fin(1), 3);
        net.add_arc(0, 2, fin(1), 7);
        let sp = shortest_paths(&net).unwrap();
        assert_eq!(sp.dist, vec![Some(0), Some(2), Some(5)]);
        assert_eq!(sp.path_to(&net, 2), Some(vec![0, 1]));
    }
}
