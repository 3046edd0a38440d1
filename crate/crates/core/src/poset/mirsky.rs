use super::Poset;
use crate::error::{Error, Result};
use crate::scalar::Weight;

/// Antichains with multiplicities covering every element `x` exactly
/// `f(x)` times, and a chain whose `f`-weight equals the family size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirskyCover<T> {
    pub antichains: Vec<(Vec<usize>, T)>,
    /// Listed from the largest element down.
    pub chain: Vec<usize>,
    pub size: T,
}

/// Two-phase greedy. Phase one repeatedly takes the minimal positive
/// elements `A_i` and subtracts their least value `mu_i`. Phase two starts
/// in the last antichain and steps down to the latest earlier antichain
/// avoiding the current element, picking an element of it below.
pub fn mirsky_cover<T: Weight>(poset: &Poset, f: &[T]) -> Result<MirskyCover<T>> {
    let n = poset.len();
    if f.len() != n || f.iter().any(|&v| v < T::zero()) {
        return Err(Error::InvalidInput("f must give a nonnegative value per element".into()));
    }
    let mut rest = f.to_vec();
    let mut antichains: Vec<(Vec<usize>, T)> = Vec::new();
    loop {
        let positive: Vec<usize> = (0..n).filter(|&x| rest[x] > T::zero()).collect();
        if positive.is_empty() {
            break;
        }
        let minimal: Vec<usize> = positive
            .iter()
            .copied()
            .filter(|&x| !poset.below(x).ones().any(|y| rest[y] > T::zero()))
            .collect();
        let mu = minimal.iter().map(|&x| rest[x]).min().expect("a finite poset has minimal elements");
        minimal.iter().for_each(|&x| rest[x] = rest[x] - mu);
        antichains.push((minimal, mu));
    }

    let mut chain = Vec::new();
    if let Some((last, _)) = antichains.last() {
        let member = |i: usize, x: usize| antichains[i].0.contains(&x);
        let mut p = last[0];
        let mut i = antichains.len() - 1;
        chain.push(p);
        loop {
            while i > 0 && member(i - 1, p) {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            i -= 1;
            p = *antichains[i].0.iter().find(|&&q| poset.greater(p, q)).expect("a smaller element exists");
            chain.push(p);
        }
    }
    let size = antichains.iter().map(|(_, k)| *k).sum();
    Ok(MirskyCover { antichains, chain, size })
}
