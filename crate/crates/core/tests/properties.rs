//! Invariants checked on generated instances against exhaustive search.

use std::collections::BTreeSet;

use proptest::prelude::*;
use stablecut::assoc::AssocDigraph;
use stablecut::fair::{fair_stable_matching, level_count_vector, worst_edge_minimizer, LevelAssignment};
use stablecut::flow::{decompose_into_path_flows, max_flow, min_cost_flow_unit_costs, FlowNetwork};
use stablecut::lcut::min_lcut;
use stablecut::optimize::{cheapest_stable_matching, pack_h_independent};
use stablecut::oracle;
use stablecut::poset::{dilworth_weighted, pack_d_antichains, weighted_greene_kleitman, Poset, InducedPoset};
use stablecut::prefs::{gale_shapley, Proposers};
use stablecut::scalar::Capacity;
use stablecut::{reduce_to_core, CoreSystem, Matching, NodeSet, PreferenceSystem, RingCode};

mod common;
use common::{mixed_instance, ring_members};

struct Case {
    input: PreferenceSystem,
    core: CoreSystem,
    d: AssocDigraph,
    family: Vec<Matching>,
}

fn case(seed: u64, max_side: usize) -> Case {
    let input = mixed_instance(seed, max_side);
    let core = reduce_to_core(&input);
    let d = AssocDigraph::new(&core);
    let family = oracle::enumerate_stable(core.system(), usize::MAX).expect("small instance");
    Case { input, core, d, family }
}

fn shore(c: &Case, m: &Matching) -> NodeSet {
    c.d.shore_of(&c.core, m).expect("stable")
}

/// Girl `w` weakly prefers her partner in `a` to that in `b`.
fn girls_prefer(system: &PreferenceSystem, a: &Matching, b: &Matching) -> bool {
    let rank = |m: &Matching| {
        let mut r = vec![usize::MAX; system.girls().len()];
        m.iter().for_each(|e| r[system.edge(e).girl] = system.girl_rank(e));
        r
    };
    rank(a).iter().zip(rank(b)).all(|(x, y)| *x <= y)
}

fn random_network(n: usize, arcs: &[(usize, usize, Option<i64>, i64)]) -> FlowNetwork<i64> {
    let mut net = FlowNetwork::new(n, 0, n - 1);
    for &(u, v, cap, cost) in arcs {
        let (u, v) = (u % (n - 1), 1 + v % (n - 1));
        if u != v {
            net.add_arc(u, v, cap.map_or(Capacity::Infinite, Capacity::Finite), cost);
        }
    }
    net
}

fn arcs_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize, Option<i64>, i64)>)> {
    (2usize..=8, prop::collection::vec((0usize..8, 0usize..8, prop::option::weighted(0.9, 0i64..6), 0i64..2), 0..20))
}

fn min_cut_by_subsets(net: &FlowNetwork<i64>) -> Option<i64> {
    let n = net.node_count();
    let mut best: Option<i64> = None;
    for mask in 0u32..(1 << n) {
        if mask & 1 == 0 || mask >> (n - 1) & 1 == 1 {
            continue;
        }
        let mut z = NodeSet::with_capacity(n);
        (0..n).filter(|v| mask >> v & 1 == 1).for_each(|v| z.insert(v));
        if let Capacity::Finite(c) = net.cut_capacity(&z).unwrap() {
            best = Some(best.map_or(c, |b| b.min(c)));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn girls_proposing_is_girl_optimal(seed in any::<u64>()) {
        let input = mixed_instance(seed, 6);
        let family = oracle::enumerate_stable(&input, usize::MAX).unwrap();
        let best = gale_shapley(&input, Proposers::Girls);
        prop_assert!(family.contains(&best));
        for m in &family {
            prop_assert!(girls_prefer(&input, &best, m));
        }
    }

    #[test]
    fn core_keeps_stable_matchings(seed in any::<u64>()) {
        let c = case(seed, 6);
        let from_input: BTreeSet<Matching> = oracle::enumerate_stable(&c.input, usize::MAX)
            .unwrap()
            .iter()
            .map(|m| c.core.from_input(m).expect("uses core edges"))
            .collect();
        let in_core: BTreeSet<Matching> = c.family.iter().cloned().collect();
        prop_assert_eq!(from_input, in_core);
        let stable: BTreeSet<_> = c.family.iter().flat_map(|m| m.iter()).collect();
        prop_assert_eq!(stable, c.core.stable_edges().iter().copied().collect::<BTreeSet<_>>());
    }

    #[test]
    fn matching_is_join_of_its_edge_matchings(seed in any::<u64>()) {
        let c = case(seed, 6);
        for m in &c.family {
            let mut acc = c.core.girl_best().clone();
            for e in m.iter() {
                acc = c.core.join(&acc, c.core.girl_best_with(e).unwrap()).unwrap();
            }
            prop_assert_eq!(&acc, m);
        }
    }

    #[test]
    fn lattice_laws(seed in any::<u64>()) {
        let c = case(seed, 5);
        let meet = |a: &Matching, b: &Matching| -> Matching { c.core.meet(a, b).unwrap() };
        let join = |a: &Matching, b: &Matching| -> Matching { c.core.join(a, b).unwrap() };
        for a in &c.family {
            for b in &c.family {
                prop_assert!(c.family.contains(&meet(a, b)) && c.family.contains(&join(a, b)));
                prop_assert_eq!(meet(a, b), meet(b, a));
                prop_assert_eq!(join(a, b), join(b, a));
                prop_assert_eq!(&meet(a, &join(a, b)), a);
                prop_assert_eq!(&join(a, &meet(a, b)), a);
                for x in c.family.iter().take(6) {
                    prop_assert_eq!(meet(&meet(a, b), x), meet(a, &meet(b, x)));
                    prop_assert_eq!(join(&join(a, b), x), join(a, &join(b, x)));
                    prop_assert_eq!(meet(a, &join(b, x)), join(&meet(a, b), &meet(a, x)));
                }
            }
        }
    }

    #[test]
    fn ring_members_are_closed(n in 2usize..=8, arcs in prop::collection::vec((0usize..8, 0usize..8), 0..12)) {
        let ring = RingCode::from_generators(n, 0, n - 1, arcs.iter().map(|&(u, v)| (u % n, v % n)).collect::<Vec<_>>());
        let subsets: Vec<NodeSet> = (0u32..(1 << n))
            .map(|mask| {
                let mut z = NodeSet::with_capacity(n);
                (0..n).filter(|v| mask >> v & 1 == 1).for_each(|v| z.insert(v));
                z
            })
            .collect();
        let members: Vec<&NodeSet> = subsets.iter().filter(|z| ring.is_member(z)).collect();
        for a in &members {
            for b in &members {
                prop_assert!(ring.is_member(&a.union(b).collect()));
                prop_assert!(ring.is_member(&a.intersection(b).collect()));
            }
        }
        for u in 0..n {
            prop_assert!(ring.is_member(ring.code(u)));
            for z in members.iter().filter(|z| z.contains(u)) {
                prop_assert!(ring.code(u).is_subset(z));
            }
        }
    }

    #[test]
    fn max_flow_equals_min_cut((n, arcs) in arcs_strategy()) {
        let net = random_network(n, &arcs);
        match max_flow(&net) {
            Ok(mf) => {
                prop_assert_eq!(Some(mf.value), min_cut_by_subsets(&net));
                net.check_flow(&mf.flow).unwrap();
                prop_assert_eq!(net.cut_capacity(&mf.min_cut).unwrap(), Capacity::Finite(mf.value));
                let paths = decompose_into_path_flows(&net, &mf.flow);
                if let Ok(paths) = paths {
                    let mut sum = vec![0i64; net.arcs().len()];
                    for (p, k) in &paths {
                        p.iter().for_each(|&a| sum[a] += k);
                    }
                    prop_assert_eq!(sum, mf.flow.clone());
                }
            }
            Err(stablecut::Error::Unbounded) => prop_assert_eq!(min_cut_by_subsets(&net), None),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn unit_cost_flow_optimality((n, arcs) in arcs_strategy(), ell in 1usize..=3) {
        let net = random_network(n, &arcs);
        if let Ok(f) = min_cost_flow_unit_costs(&net, ell) {
            prop_assert_eq!(f.potential[net.source()], 0);
            for (i, a) in net.arcs().iter().enumerate() {
                let delta = f.potential[a.head] - f.potential[a.tail];
                if a.cost > delta {
                    prop_assert_eq!(f.flow[i], 0);
                }
                if a.cost < delta {
                    prop_assert_eq!(Capacity::Finite(f.flow[i]), a.cap);
                }
            }
        }
    }

    #[test]
    fn shores_biject_with_matchings(seed in any::<u64>()) {
        let c = case(seed, 6);
        prop_assume!(c.core.n() > 0);
        for m in &c.family {
            let z = shore(&c, m);
            prop_assert!(c.d.ring().is_member(&z));
            prop_assert_eq!(&c.d.matching_of(&z).unwrap(), m);
            let leaving = c.d.stable_arcs().iter().filter(|(_, u, v)| z.contains(*u) && !z.contains(*v)).count();
            prop_assert_eq!(leaving, c.core.n());
        }
        let members = ring_members(c.d.ring());
        prop_assert_eq!(members.len(), c.family.len());
        for z in members {
            let mut set = NodeSet::with_capacity(c.d.node_count());
            z.iter().for_each(|&v| set.insert(v));
            let m = c.d.matching_of(&set).unwrap();
            prop_assert_eq!(shore(&c, &m), set);
        }
    }

    #[test]
    fn shores_follow_the_lattice(seed in any::<u64>()) {
        let c = case(seed, 6);
        for a in &c.family {
            for b in &c.family {
                let (za, zb) = (shore(&c, a), shore(&c, b));
                let meet = shore(&c, &c.core.meet(a, b).unwrap());
                let join = shore(&c, &c.core.join(a, b).unwrap());
                let (mut both, mut either) = (za.clone(), za.clone());
                both.intersect_with(&zb);
                either.union_with(&zb);
                prop_assert_eq!(meet, both);
                prop_assert_eq!(join, either);
                prop_assert_eq!(girls_prefer(c.core.system(), a, b), za.is_subset(&zb));
            }
        }
    }

    #[test]
    fn packing_is_a_chain_and_blocks(seed in any::<u64>(), costs in prop::collection::vec(0i64..4, 64)) {
        let c = case(seed, 6);
        prop_assume!(c.core.n() > 0);
        let m = c.core.system().edge_count();
        let cost: Vec<i64> = (0..m).map(|i| costs[i % costs.len()]).collect();
        let h = vec![1i64; m];
        let cert = pack_h_independent(&c.core, &c.d, &h, Some(&cost)).unwrap();
        let shores: Vec<NodeSet> = cert.family.iter().map(|(m, _)| shore(&c, m)).collect();
        prop_assert!(shores.windows(2).all(|w| w[0].is_subset(&w[1])));
        let best = cheapest_stable_matching(&c.core, &c.d, &cost).unwrap().cost;
        for m in c.family.iter().filter(|m| m.iter().map(|e| cost[e.0]).sum::<i64>() == best) {
            prop_assert!(m.iter().any(|e| cert.blocker.contains(&e)));
        }
        let plain = pack_h_independent(&c.core, &c.d, &h, None).unwrap();
        prop_assert_eq!(plain.value as usize, oracle::brute_max_packing(&c.family, |_| 1, usize::MAX));
    }

    #[test]
    fn lcut_weak_duality((n, arcs) in arcs_strategy(), ell in 1usize..=3, flows in prop::collection::vec(0i64..3, 20)) {
        let net = random_network(n, &arcs);
        let Ok(cert) = min_lcut(&net, ell) else { return Ok(()); };
        cert.verify().unwrap();
        prop_assert!(cert.shores.windows(2).all(|w| w[0].is_subset(&w[1])));
        for (i, a) in cert.shores.iter().enumerate() {
            for b in &cert.shores[i + 1..] {
                let shared = (0..net.arcs().len()).any(|k| net.leaves(k, a) && net.leaves(k, b));
                prop_assert!(!shared);
            }
        }
        // Any nonnegative flow: rescaled path flows of a maximum flow.
        let Ok(mf) = max_flow(&net) else { return Ok(()); };
        let Ok(paths) = decompose_into_path_flows(&net, &mf.flow) else { return Ok(()); };
        let mut z = vec![0i64; net.arcs().len()];
        let mut amount = 0;
        for ((p, _), k) in paths.iter().zip(flows.iter().cycle()) {
            p.iter().for_each(|&a| z[a] += k);
            amount += k;
        }
        let surplus: i64 = net.arcs().iter().zip(&z).map(|(a, &f)| match a.cap {
            Capacity::Finite(g) => (f - g).max(0),
            Capacity::Infinite => 0,
        }).sum();
        prop_assert!(cert.capacity >= ell as i64 * amount - surplus);
    }

    #[test]
    fn maximal_antichains_are_stable_matchings(seed in any::<u64>()) {
        let c = case(seed, 5);
        let p = InducedPoset::new(&c.core, &c.d);
        let k = p.poset().len();
        prop_assume!(k <= 16);
        for mask in 0u32..(1 << k) {
            let a: Vec<usize> = (0..k).filter(|x| mask >> x & 1 == 1).collect();
            if !p.poset().is_antichain(&a) {
                continue;
            }
            let maximal = (0..k).all(|y| a.contains(&y) || a.iter().any(|&x| p.poset().comparable(x, y)));
            if maximal {
                prop_assert_eq!(a.len(), c.core.n());
                prop_assert!(c.family.contains(&p.to_matching(&a)));
            }
        }
    }

    #[test]
    fn antichain_packing_matches_matching_packing(seed in any::<u64>()) {
        let c = case(seed, 6);
        prop_assume!(c.core.n() > 0);
        let p = InducedPoset::new(&c.core, &c.d);
        let ones = vec![1i64; c.core.system().edge_count()];
        let a = pack_d_antichains(p.poset(), &p.lift(&ones)).unwrap();
        let m = pack_h_independent(&c.core, &c.d, &ones, None).unwrap();
        prop_assert_eq!(a.value, m.value);
    }

    #[test]
    fn dilworth_covers_each_element(n in 1usize..=8, rel in prop::collection::vec((0usize..8, 0usize..8), 0..14), w in prop::collection::vec(0i64..4, 8)) {
        let poset = Poset::from_relation(n, rel.iter().map(|&(x, y)| (x % n, y % n)).filter(|(x, y)| x > y)).unwrap();
        let w = &w[..n];
        let cover = dilworth_weighted(&poset, w).unwrap();
        prop_assert!(poset.is_antichain(&cover.antichain));
        prop_assert_eq!(cover.weight, cover.chains.iter().map(|(_, k)| k).sum::<i64>());
        prop_assert_eq!(cover.weight, oracle::brute_max_antichain(&poset, w).0);
        for x in 0..n {
            let on: i64 = cover.chains.iter().filter(|(c, _)| c.contains(&x)).map(|(_, k)| k).sum();
            prop_assert!(on >= w[x]);
        }
        for (c, _) in &cover.chains {
            prop_assert!(poset.is_chain(c));
        }
    }

    #[test]
    fn weighted_gk_matches_brute(n in 1usize..=7, rel in prop::collection::vec((0usize..7, 0usize..7), 0..12), w in prop::collection::vec(0i64..4, 7), ell in 1usize..=3) {
        let poset = Poset::from_relation(n, rel.iter().map(|&(x, y)| (x % n, y % n)).filter(|(x, y)| x > y)).unwrap();
        let w = &w[..n];
        let cert = weighted_greene_kleitman(&poset, w, ell, 1000).unwrap();
        cert.verify(&poset, w).unwrap();
        prop_assert_eq!(cert.value, oracle::brute_max_k_family(&poset, ell, w));
    }

    #[test]
    fn fair_signature_is_consistent(seed in any::<u64>()) {
        let c = case(seed, 5);
        prop_assume!(c.core.n() > 0);
        let levels = LevelAssignment::rank_levels(&c.core);
        let (m, sig) = fair_stable_matching(&c.core, &c.d, &levels).unwrap();
        let counts = level_count_vector(&levels, &m);
        prop_assert!(sig.lambdas.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(sig.betas.iter().sum::<usize>(), 2 * c.core.n());
        for (l, &k) in counts.iter().enumerate() {
            let level = l as u32 + 1;
            match sig.lambdas.iter().position(|&x| x == level) {
                Some(i) => prop_assert_eq!(k, sig.betas[i]),
                None => prop_assert_eq!(k, 0),
            }
        }
        let (_, worst) = worst_edge_minimizer(&c.core, &c.d).unwrap();
        let brute = c.family.iter().map(|m| m.iter().map(|e| {
            let s = c.core.system();
            let last = |list: &[stablecut::EdgeId]| list.iter().rev().find(|&&f| c.core.is_stable_edge(f)) == Some(&e);
            i64::from(last(s.boy_prefs(s.edge(e).boy))) + i64::from(last(s.girl_prefs(s.edge(e).girl)))
        }).sum::<i64>()).min().unwrap();
        prop_assert_eq!(worst, brute);
    }

    #[test]
    fn min_cost_flow_respects_capacities((n, arcs) in arcs_strategy()) {
        let net = random_network(n, &arcs);
        if let Ok(f) = min_cost_flow_unit_costs(&net, 1) {
            net.check_flow(&f.flow).unwrap();
        }
    }
}
