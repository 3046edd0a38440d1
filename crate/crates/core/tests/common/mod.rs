//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stablecut::oracle;
use stablecut::{PreferenceSystem, RingCode};

/// Uniform random lists on even seeds, a perturbed cyclic system on odd ones.
pub fn mixed_instance(seed: u64, max_side: usize) -> PreferenceSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    if seed.is_multiple_of(2) {
        let nb = rng.gen_range(1..=max_side);
        let nw = rng.gen_range(1..=max_side);
        oracle::random_instance(nb, nw, rng.gen_range(0.3..=1.0), seed)
    } else {
        let n = rng.gen_range(2..=max_side.max(2));
        oracle::perturbed_cyclic(n, rng.gen_range(0..=n), rng.gen_range(0.0..0.3), seed)
    }
}

/// All nontrivial members of the ring, by branching on each node.
pub fn ring_members(ring: &RingCode) -> Vec<BTreeSet<usize>> {
    let n = ring.node_count();
    let mut out = Vec::new();
    let mut inside = vec![false; n];
    let mut outside = vec![false; n];
    fn exclude(ring: &RingCode, v: usize, outside: &mut [bool]) {
        for u in 0..ring.node_count() {
            if ring.code(u).contains(v) {
                outside[u] = true;
            }
        }
    }
    fn go(ring: &RingCode, k: usize, inside: &mut Vec<bool>, outside: &mut Vec<bool>, out: &mut Vec<BTreeSet<usize>>) {
        let n = ring.node_count();
        if k == n {
            out.push((0..n).filter(|&v| inside[v]).collect());
            return;
        }
        if inside[k] || outside[k] {
            return go(ring, k + 1, inside, outside, out);
        }
        if ring.code(k).ones().all(|u| !outside[u]) {
            let (mut i2, mut o2) = (inside.clone(), outside.clone());
            ring.code(k).ones().for_each(|u| i2[u] = true);
            go(ring, k + 1, &mut i2, &mut o2, out);
        }
        let (mut i2, mut o2) = (inside.clone(), outside.clone());
        exclude(ring, k, &mut o2);
        if (0..n).all(|u| !(i2[u] && o2[u])) {
            go(ring, k + 1, &mut i2, &mut o2, out);
        }
    }
    ring.code(ring.source()).ones().for_each(|u| inside[u] = true);
    exclude(ring, ring.sink(), &mut outside);
    if (0..n).any(|u| inside[u] && outside[u]) {
        return out;
    }
    go(ring, 0, &mut inside, &mut outside, &mut out);
    out
}

