use super::Poset;
use crate::error::{Error, Result};
use crate::flow::{b_matching_max, decompose_into_path_flows, FlowNetwork};
use crate::scalar::{Capacity, Weight};

/// A maximum-weight antichain and chains with multiplicities covering every
/// element `x` exactly `w(x)` times, their total equal to the antichain weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainCover<T> {
    pub antichain: Vec<usize>,
    pub weight: T,
    /// Chains listed from the largest element down.
    pub chains: Vec<(Vec<usize>, T)>,
}

/// Weighted Dilworth. On the bipartite graph with an edge `x'y''` for each
/// `x > y` and `b = w` on both copies, a maximum b-matching `z` (its support
/// a forest) and a minimum cover are found; elements with neither copy in
/// the cover form the antichain, and the flow `z` on comparabilities plus
/// `w(v) - deg` on the source and sink arcs decomposes into the chains.
pub fn dilworth_weighted<T: Weight>(poset: &Poset, w: &[T]) -> Result<ChainCover<T>> {
    if w.len() != poset.len() || w.iter().any(|&v| v < T::zero()) {
        return Err(Error::InvalidInput("w must give a nonnegative value per element".into()));
    }
    let keep: Vec<usize> = (0..poset.len()).filter(|&x| w[x] > T::zero()).collect();
    let sub = poset.restrict(&keep);
    let b: Vec<T> = keep.iter().map(|&x| w[x]).collect();
    let pairs: Vec<(usize, usize)> = sub.relations().collect();
    let bm = b_matching_max(&b, &b, &pairs)?;

    let k = keep.len();
    let antichain: Vec<usize> = (0..k).filter(|&i| !bm.cover_left[i] && !bm.cover_right[i]).map(|i| keep[i]).collect();
    let total: T = b.iter().copied().sum();
    let weight = total - bm.value;

    let (s, t) = (k, k + 1);
    let mut net = FlowNetwork::new(k + 2, s, t);
    let mut flow = Vec::new();
    let mut deg_out = vec![T::zero(); k];
    let mut deg_in = vec![T::zero(); k];
    for (&(x, y), &z) in pairs.iter().zip(&bm.z) {
        net.add_arc(x, y, Capacity::Infinite, T::zero());
        flow.push(z);
        deg_out[x] = deg_out[x] + z;
        deg_in[y] = deg_in[y] + z;
    }
    for v in 0..k {
        net.add_arc(s, v, Capacity::Infinite, T::zero());
        flow.push(b[v] - deg_in[v]);
        net.add_arc(v, t, Capacity::Infinite, T::zero());
        flow.push(b[v] - deg_out[v]);
    }
    let paths = decompose_into_path_flows(&net, &flow)?;
    let chains = paths
        .into_iter()
        .map(|(arcs, mult)| {
            let nodes = arcs.iter().map(|&a| net.arc(a).head).filter(|&v| v != t).map(|v| keep[v]).collect();
            (nodes, mult)
        })
        .collect();
    Ok(ChainCover { antichain, weight, chains })
}

/// A partition into the fewest chains, each listed from the largest down.
pub fn min_chain_partition(poset: &Poset) -> Result<Vec<Vec<usize>>> {
    let n = poset.len();
    let ones = vec![1i64; n];
    let pairs: Vec<(usize, usize)> = poset.relations().collect();
    let bm = b_matching_max(&ones, &ones, &pairs)?;
    let mut next = vec![None; n];
    let mut has_prev = vec![false; n];
    for (&(x, y), &z) in pairs.iter().zip(&bm.z) {
        if z > 0 {
            next[x] = Some(y);
            has_prev[y] = true;
        }
    }
    Ok((0..n)
        .filter(|&x| !has_prev[x])
        .map(|x| std::iter::successors(Some(x), |&v| next[v]).collect())
        .collect())
}
