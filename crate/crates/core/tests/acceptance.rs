//! The ten acceptance criteria, each checked against exhaustive search on
//! seeded instances: uniform random lists on even seeds, perturbed cyclic
//! systems (many stable matchings) on odd ones. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stablecut::assoc::AssocDigraph;
use stablecut::fair::{fair_stable_matching, level_count_vector, LevelAssignment};
use stablecut::flow::FlowNetwork;
use stablecut::lcut::{disjoint_stable_matchings_min_total_cost, max_weight_union, min_lcut};
use stablecut::optimize::{cheapest_stable_matching, pack_h_independent};
use stablecut::oracle::{self, fixture_cyclic3};
use stablecut::poset::{greene_kleitman, Inclusion, InducedPoset, Poset};
use stablecut::scalar::Capacity;
use stablecut::{reduce_to_core, CoreSystem, EdgeId, Error, Matching, PreferenceSystem};

mod common;
use common::ring_members;

const SEEDS: u64 = 500;

type Outcome = Result<String, String>;

struct Instance {
    seed: u64,
    core: CoreSystem,
    d: AssocDigraph,
    /// Stable matchings of the core, by exhaustive search.
    family: Vec<Matching>,
}

fn instance(seed: u64, max_side: usize) -> (PreferenceSystem, Instance) {
    let system = common::mixed_instance(seed, max_side);
    let core = reduce_to_core(&system);
    let d = AssocDigraph::new(&core);
    let family = oracle::enumerate_stable(core.system(), usize::MAX).expect("small instance");
    (system, Instance { seed, core, d, family })
}

fn instances(max_side: usize) -> Vec<Instance> {
    (0..SEEDS).map(|s| instance(s, max_side).1).collect()
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt))
}

/// Per-edge values drawn from `range` on stable edges, zero elsewhere.
fn random_values(inst: &Instance, rng: &mut ChaCha8Rng, range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
    let mut v = vec![0; inst.core.system().edge_count()];
    for &e in inst.core.stable_edges() {
        v[e.0] = rng.gen_range(range.clone());
    }
    v
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bijection(all: &[Instance], inputs: &[PreferenceSystem], started: Instant) -> Outcome {
    let mut matchings = 0;
    for (inst, input) in all.iter().zip(inputs) {
        let seed = inst.seed;
        let input_family = oracle::enumerate_stable(input, usize::MAX).map_err(|e| e.to_string())?;
        ensure(input_family.len() == inst.family.len(), || format!("seed {seed}: core changed the stable family"))?;
        for m in &input_family {
            let cm = inst.core.from_input(m).ok_or_else(|| format!("seed {seed}: stable matching uses a removed edge"))?;
            let z = inst.d.shore_of(&inst.core, &cm).map_err(|e| format!("seed {seed}: {e}"))?;
            let back = inst.d.matching_of(&z).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(back == cm, || format!("seed {seed}: round trip changed a matching"))?;
        }
        if inst.core.n() > 0 {
            let members = ring_members(inst.d.ring());
            ensure(members.len() == inst.family.len(), || {
                format!("seed {seed}: {} ring members vs {} stable matchings", members.len(), inst.family.len())
            })?;
        }
        matchings += inst.family.len();
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} instances, {matchings} stable matchings, {elapsed:.2?}", all.len()))
}

fn nu_tau(all: &[Instance]) -> Outcome {
    let mut checked = 0;
    for inst in all.iter().filter(|i| i.core.n() > 0) {
        let seed = inst.seed;
        let mut rng = rng_for(seed, 2);
        let ones = random_values(inst, &mut rng, 1..=1);
        let random = random_values(inst, &mut rng, 0..=3);
        for h in [ones, random] {
            let cert = pack_h_independent(&inst.core, &inst.d, &h, None).map_err(|e| format!("seed {seed}: {e}"))?;
            let (tau, _) = oracle::brute_min_blocker(&inst.family, |e| h[e.0]).expect("nonempty matchings");
            ensure(cert.value == tau && cert.nu() == tau && cert.tau(&h) == tau, || {
                format!("seed {seed}: value {} nu {} tau {} vs oracle {tau}", cert.value, cert.nu(), cert.tau(&h))
            })?;
            for &e in inst.core.stable_edges() {
                let used: i64 = cert.family.iter().filter(|(m, _)| m.contains(e)).map(|(_, k)| k).sum();
                ensure(used <= h[e.0], || format!("seed {seed}: edge {} used {used} > {}", e.0, h[e.0]))?;
            }
            cert.verify(&inst.core, &inst.d, &h, None).map_err(|e| format!("seed {seed}: {e}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} packings equal the brute-force blocker"))
}

fn cheapest(all: &[Instance]) -> Outcome {
    for inst in all.iter().filter(|i| i.core.n() > 0) {
        let seed = inst.seed;
        let c = random_values(inst, &mut rng_for(seed, 3), -3..=9);
        let got = cheapest_stable_matching(&inst.core, &inst.d, &c).map_err(|e| format!("seed {seed}: {e}"))?;
        let cost = |m: &Matching| m.iter().map(|e| c[e.0]).sum::<i64>();
        let minimizers = oracle::brute_minimizers(&inst.family, cost);
        let expected = oracle::brute_girl_best(inst.core.system(), &minimizers).expect("nonempty");
        ensure(got.cost == cost(&expected), || format!("seed {seed}: cost {} vs {}", got.cost, cost(&expected)))?;
        ensure(got.matching == expected, || format!("seed {seed}: not the girl-best minimizer"))?;
    }
    Ok("costs and girl-best minimizers match".into())
}

fn random_digraph(seed: u64) -> FlowNetwork<i64> {
    let mut rng = rng_for(seed, 40);
    let n = rng.gen_range(2..=10);
    let mut net = FlowNetwork::new(n, 0, n - 1);
    for u in 0..n - 1 {
        for v in 1..n {
            if u != v && rng.gen_bool(0.35) {
                let cap = if rng.gen_bool(0.1) { Capacity::Infinite } else { Capacity::Finite(rng.gen_range(0..=5)) };
                net.add_arc(u, v, cap, 0);
            }
        }
    }
    net
}

fn lcut_duality(all: &[Instance]) -> Outcome {
    let mut certified = 0;
    let mut brute = 0;
    let mut check = |net: &FlowNetwork<i64>, ell: usize, tag: String| -> Result<(), String> {
        let expected = if net.node_count() <= 10 { Some(oracle::brute_min_lcut(net, ell)) } else { None };
        match min_lcut(net, ell) {
            Ok(cert) => {
                cert.verify().map_err(|e| format!("{tag}: {e}"))?;
                ensure(cert.capacity == cert.dual, || format!("{tag}: primal {} dual {}", cert.capacity, cert.dual))?;
                if let Some(exp) = expected {
                    ensure(exp == Some(cert.capacity), || format!("{tag}: {} vs brute {exp:?}", cert.capacity))?;
                    brute += 1;
                }
                certified += 1;
            }
            Err(Error::NoFiniteLCut { .. }) => {
                if let Some(exp) = expected {
                    ensure(exp.is_none(), || format!("{tag}: reported none, brute force found {exp:?}"))?;
                    brute += 1;
                }
            }
            Err(e) => return Err(format!("{tag}: {e}")),
        }
        Ok(())
    };
    for inst in all.iter().filter(|i| i.core.n() > 0) {
        let mut rng = rng_for(inst.seed, 4);
        let g = random_values(inst, &mut rng, 0..=4);
        let net = inst.d.network(inst.d.ring(), |e| Capacity::Finite(g[e.0]));
        for ell in 1..=3 {
            check(&net, ell, format!("seed {} ell {ell}", inst.seed))?;
        }
    }
    for seed in 0..SEEDS {
        let net = random_digraph(seed);
        for ell in 1..=3 {
            check(&net, ell, format!("digraph {seed} ell {ell}"))?;
        }
    }
    Ok(format!("{certified} certificates verified, {brute} compared with chain enumeration"))
}

fn disjoint_min_cost(all: &[Instance]) -> Outcome {
    let mut solved = 0;
    for inst in all.iter().filter(|i| i.core.n() > 0) {
        let seed = inst.seed;
        let c = random_values(inst, &mut rng_for(seed, 5), 0..=6);
        for ell in 1..=3 {
            let expected = oracle::brute_disjoint_min_cost(&inst.family, ell, |e| c[e.0]);
            match (disjoint_stable_matchings_min_total_cost(&inst.core, &inst.d, ell, &c), expected) {
                (Ok(fam), Some(exp)) => {
                    ensure(fam.total_cost == exp, || format!("seed {seed} ell {ell}: {} vs {exp}", fam.total_cost))?;
                    let distinct = fam.matchings.iter().enumerate().all(|(i, a)| {
                        inst.family.contains(a) && fam.matchings[i + 1..].iter().all(|b| a.is_disjoint(b))
                    });
                    ensure(distinct, || format!("seed {seed} ell {ell}: family not disjoint stable"))?;
                    solved += 1;
                }
                (Err(Error::InsufficientDisjoint { .. }), None) => {}
                (got, exp) => return Err(format!("seed {seed} ell {ell}: {:?} vs {exp:?}", got.map(|f| f.total_cost))),
            }
        }
    }
    Ok(format!("{solved} feasible families optimal, infeasibility agreed elsewhere"))
}

fn max_union(all: &[Instance]) -> Outcome {
    for inst in all.iter().filter(|i| i.core.n() > 0) {
        let seed = inst.seed;
        let w = random_values(inst, &mut rng_for(seed, 6), 0..=5);
        for ell in 1..=3 {
            let got = max_weight_union(&inst.core, ell, &w).map_err(|e| format!("seed {seed}: {e}"))?;
            let exp = oracle::brute_max_union(&inst.family, ell, |e| w[e.0]);
            ensure(got.weight == exp, || format!("seed {seed} ell {ell}: {} vs {exp}", got.weight))?;
            let union: BTreeSet<EdgeId> = got.matchings.iter().flat_map(|m| m.iter()).collect();
            ensure(union.iter().map(|e| w[e.0]).sum::<i64>() == got.weight, || format!("seed {seed}: weight mismatch"))?;
            ensure(got.matchings.iter().all(|m| inst.family.contains(m)), || format!("seed {seed}: unstable member"))?;
        }
    }
    let core = reduce_to_core(&fixture_cyclic3());
    let i3 = max_weight_union(&core, 2, &[1i64; 9]).map_err(|e| e.to_string())?.weight;
    ensure(i3 == 6, || format!("cyclic 3x3 gave {i3}"))?;
    Ok("all unions optimal; cyclic 3x3, ell 2 gives 6".into())
}

fn poset_suite(all: &[Instance]) -> Outcome {
    for inst in all.iter().filter(|i| i.core.n() > 0) {
        let seed = inst.seed;
        let p = InducedPoset::new(&inst.core, &inst.d);
        let poset = p.poset();
        for x in 0..poset.len() {
            for y in 0..poset.len() {
                let (e, f) = (p.element(x), p.element(y));
                let together = inst.family.iter().any(|m| m.contains(e) && m.contains(f));
                ensure(together == !poset.comparable(x, y) || x == y, || {
                    format!("seed {seed}: elements {x},{y} comparability disagrees with co-membership")
                })?;
            }
        }
        let mut rng = rng_for(seed, 7);
        let f = random_values(inst, &mut rng, 0..=3);
        let (family, chain) = p.mirsky_cover(&inst.core, &f).map_err(|e| format!("seed {seed}: {e}"))?;
        let size: i64 = family.iter().map(|(_, k)| k).sum();
        ensure(size == chain.iter().map(|e| f[e.0]).sum::<i64>(), || format!("seed {seed}: mirsky size"))?;
        for &e in inst.core.stable_edges() {
            let cover: i64 = family.iter().filter(|(m, _)| m.contains(e)).map(|(_, k)| k).sum();
            ensure(cover >= f[e.0], || format!("seed {seed}: mirsky covers edge {} {cover} times", e.0))?;
        }

        let w = random_values(inst, &mut rng, 0..=3);
        let (matching, cover) = p.dilworth(&inst.core, &w).map_err(|e| format!("seed {seed}: {e}"))?;
        let total: i64 = cover.chains.iter().map(|(_, k)| k).sum();
        ensure(cover.weight == total, || format!("seed {seed}: antichain {} vs {total} chains", cover.weight))?;
        let best = inst.family.iter().map(|m| m.iter().map(|e| w[e.0]).sum::<i64>()).max().unwrap_or(0);
        let lifted = p.lift(&w);
        let (brute_anti, _) = oracle::brute_max_antichain(poset, &lifted);
        ensure(cover.weight == brute_anti && best == brute_anti, || format!("seed {seed}: antichain not maximum"))?;
        ensure(inst.family.contains(&matching), || format!("seed {seed}: extension is not stable"))?;
        let distinct: BTreeSet<&Vec<usize>> = cover.chains.iter().map(|(c, _)| c).collect();
        ensure(distinct.len() <= 4 * poset.len(), || format!("seed {seed}: {} distinct chains", distinct.len()))?;

        for _ in 0..4 {
            let h: Vec<EdgeId> = inst.core.stable_edges().iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
            let expected = inst.family.iter().any(|m| m.iter().all(|e| h.contains(&e)));
            match p.includes_stable_matching(&inst.core, &h).map_err(|e| format!("seed {seed}: {e}"))? {
                Inclusion::Witness(m) => ensure(expected && inst.family.contains(&m) && m.iter().all(|e| h.contains(&e)), || {
                    format!("seed {seed}: bad witness")
                })?,
                Inclusion::Cover(chains) => ensure(!expected && chains.len() < inst.core.n(), || {
                    format!("seed {seed}: bad cover")
                })?,
            }
        }
    }
    Ok("comparability, covers and inclusion agree with enumeration".into())
}

fn random_poset(seed: u64) -> Poset {
    let mut rng = rng_for(seed, 8);
    let n = rng.gen_range(1..=9);
    let p = rng.gen_range(0.1..0.6);
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|x| (0..x).map(move |y| (x, y))).filter(|_| rng.gen_bool(p)).collect();
    Poset::from_relation(n, pairs).expect("acyclic")
}

fn greene_kleitman_suite() -> Outcome {
    for seed in 0..SEEDS {
        let poset = random_poset(seed);
        let ones = vec![1i64; poset.len()];
        for ell in 1..=4 {
            let cert = greene_kleitman(&poset, ell).map_err(|e| format!("poset {seed}: {e}"))?;
            cert.verify(&poset, &ones).map_err(|e| format!("poset {seed} ell {ell}: {e}"))?;
            let exp = oracle::brute_max_k_family(&poset, ell, &ones);
            ensure(cert.value == exp, || format!("poset {seed} ell {ell}: {} vs {exp}", cert.value))?;
        }
    }
    Ok(format!("{SEEDS} posets, ell 1..=4"))
}

fn random_levels(inst: &Instance, rng: &mut ChaCha8Rng) -> LevelAssignment {
    let system = inst.core.system();
    let top = 2 * inst.core.stable_edges().len() as u32;
    let m = system.edge_count();
    let (mut boy, mut girl) = (vec![None; m], vec![None; m]);
    let mut assign = |list: &[EdgeId], out: &mut Vec<Option<u32>>| {
        let stable: Vec<EdgeId> = list.iter().copied().filter(|&e| inst.core.is_stable_edge(e)).collect();
        let mut picks: BTreeSet<u32> = BTreeSet::new();
        while picks.len() < stable.len() {
            picks.insert(rng.gen_range(1..=top));
        }
        for (e, l) in stable.iter().zip(picks.iter().rev()) {
            out[e.0] = Some(*l);
        }
    };
    (0..system.boys().len()).for_each(|u| assign(system.boy_prefs(u), &mut boy));
    (0..system.girls().len()).for_each(|w| assign(system.girl_prefs(w), &mut girl));
    LevelAssignment::new(&inst.core, boy, girl).expect("valid levels")
}

fn fairness(small: &[Instance]) -> Outcome {
    for inst in small.iter().filter(|i| i.core.n() > 0) {
        let seed = inst.seed;
        let mut rng = rng_for(seed, 9);
        for levels in [LevelAssignment::rank_levels(&inst.core), random_levels(inst, &mut rng)] {
            let (m, sig) = fair_stable_matching(&inst.core, &inst.d, &levels).map_err(|e| format!("seed {seed}: {e}"))?;
            let (exp, exp_m) = oracle::brute_lex_fair(
                inst.core.system(),
                &inst.family,
                |e| levels.boy_level(e) as usize,
                |e| levels.girl_level(e) as usize,
            )
            .expect("nonempty");
            let mut got = level_count_vector(&levels, &m);
            while got.last() == Some(&0) {
                got.pop();
            }
            ensure(got == exp, || format!("seed {seed}: {got:?} vs {exp:?}"))?;
            ensure(m == exp_m, || format!("seed {seed}: not the girl-best fair matching"))?;
            ensure(sig.betas.iter().sum::<usize>() == 2 * inst.core.n(), || format!("seed {seed}: betas"))?;
        }
    }
    let core = reduce_to_core(&fixture_cyclic3());
    let d = AssocDigraph::new(&core);
    let (m, _) = fair_stable_matching(&core, &d, &LevelAssignment::rank_levels(&core)).map_err(|e| e.to_string())?;
    let m1: Matching = ["u1w2", "u2w3", "u3w1"].iter().map(|n| core.system().edge_by_name(n).unwrap()).collect();
    ensure(m == m1, || "cyclic 3x3 with rank levels did not give M1".into())?;
    Ok("count vectors match brute force; cyclic 3x3 gives M1".into())
}

/// reduce, stable edges, digraph, then packing, cheapest and fair.
fn pipeline(system: &PreferenceSystem) -> Result<(usize, i64, Duration), String> {
    let started = Instant::now();
    let core = reduce_to_core(system);
    let d = AssocDigraph::new(&core);
    let ones = vec![1i64; core.system().edge_count()];
    let pack = pack_h_independent(&core, &d, &ones, None).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c: Vec<i64> = (0..core.system().edge_count()).map(|_| rng.gen_range(0..100)).collect();
    let best = cheapest_stable_matching(&core, &d, &c).map_err(|e| e.to_string())?;
    let (fair, _) = fair_stable_matching(&core, &d, &LevelAssignment::rank_levels(&core)).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    ensure(best.matching.len() == 50 && fair.len() == 50, || "matchings are not perfect".into())?;
    Ok((core.stable_edges().len(), pack.value, elapsed))
}

fn performance() -> Outcome {
    let mut notes = Vec::new();
    for (name, system) in [("random", oracle::random_instance(50, 50, 1.0, 2024)), ("cyclic", oracle::fixture_cyclic(50))] {
        let (stable, packed, elapsed) = pipeline(&system)?;
        ensure(elapsed < Duration::from_secs(10), || format!("{name} took {elapsed:?}"))?;
        notes.push(format!("{name} {stable} stable edges, {packed} disjoint, {elapsed:.2?}"));
    }
    Ok(format!("complete 50x50: {}", notes.join("; ")))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let pairs: Vec<(PreferenceSystem, Instance)> = (0..SEEDS).map(|s| instance(s, 7)).collect();
    let (inputs, all): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
    let results: Vec<(&str, Outcome)> = vec![
        ("bijection", bijection(&all, &inputs, started)),
        ("nu equals tau", nu_tau(&all)),
        ("cheapest matching", cheapest(&all)),
        ("l-cut duality", lcut_duality(&all)),
        ("disjoint min cost", disjoint_min_cost(&instances(6))),
        ("max-weight union", max_union(&all)),
        ("poset suite", poset_suite(&all)),
        ("greene-kleitman", greene_kleitman_suite()),
        ("fairness", fairness(&instances(6))),
        ("performance", performance()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(note) => println!("PASS {:>2} {name}: {note}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
