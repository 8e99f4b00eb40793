//! Randomized dual-route checks: every nontrivial computation is replayed
//! against an independently coded criterion on the same inputs.

use num::bigint::BigInt;
use num::traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use brane_tiler::consistency::{consistency_class, find_r_charge, ConsistencyClass};
use brane_tiler::fan::build_triangulation;
use brane_tiler::lattice::build_lattices;
use brane_tiler::matchings::{
    count_matchings_oracle, diagram_of_center, enumerate_matchings, is_extremal,
};
use brane_tiler::mckay::{
    build_mckay_tiling, hilb_theta, origin_reaches_all_oracle, AbelianAction, McKayTiling,
};
use brane_tiler::quiver::dualize;
use brane_tiler::stability::{
    generic_witness, is_theta_stable, is_theta_stable_bruteforce, is_w_compatible,
};
use brane_tiler::tiling::{parse_tiling, BraneTiling};

const FIXTURES: [(&str, &str); 7] = [
    ("c3", include_str!("../fixtures/c3.json")),
    ("conifold", include_str!("../fixtures/conifold.json")),
    ("f0", include_str!("../fixtures/f0.json")),
    ("necklace", include_str!("../fixtures/necklace.json")),
    ("twogon", include_str!("../fixtures/twogon.json")),
    ("z3", include_str!("../fixtures/z3.json")),
    ("z6", include_str!("../fixtures/z6.json")),
];

fn mckay_battery() -> Vec<McKayTiling> {
    [
        AbelianAction::cyclic(1, [0, 0, 0]),
        AbelianAction::cyclic(3, [1, 1, 1]),
        AbelianAction::cyclic(4, [1, 1, 2]),
        AbelianAction::cyclic(5, [1, 1, 3]),
        AbelianAction::cyclic(6, [1, 2, 3]),
        AbelianAction::cyclic(7, [1, 2, 4]),
        AbelianAction::cyclic(8, [1, 3, 4]),
        AbelianAction::cyclic(9, [1, 2, 6]),
        AbelianAction::cyclic(12, [1, 4, 7]),
        AbelianAction::new(vec![2, 2], [vec![1, 0], vec![0, 1], vec![1, 1]]),
        AbelianAction::new(vec![2, 4], [vec![1, 0], vec![0, 1], vec![1, 3]]),
    ]
    .into_iter()
    .map(|a| build_mckay_tiling(a.expect("valid action")).expect("build"))
    .collect()
}

/// A uniformly random θ in [−6, 6]^{Q₀}, adjusted to sum to zero and
/// resampled until generic.
fn random_generic_theta(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    if n == 1 {
        return vec![0];
    }
    loop {
        let mut theta: Vec<i64> = (0..n).map(|_| rng.random_range(-6..=6)).collect();
        let adjust: i64 = theta.iter().sum();
        *theta.last_mut().unwrap() -= adjust;
        if generic_witness(&theta).expect("small").is_none() {
            return theta;
        }
    }
}

#[test]
fn mincut_agrees_with_bruteforce_on_w_compatible_subsets() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260819);
    for (name, src) in FIXTURES {
        let t = parse_tiling(src).unwrap();
        let q = dualize(&t);
        let ms = enumerate_matchings(&t);
        let mut samples = 0usize;
        while samples < 1200 {
            // Unions of matchings are always W-compatible; arbitrary subsets
            // are kept only when they happen to be.
            let zeroed: Vec<usize> = if rng.random_bool(0.7) {
                let k = rng.random_range(0..=3usize);
                let mut union: Vec<usize> = (0..k)
                    .flat_map(|_| ms[rng.random_range(0..ms.len())].edges.clone())
                    .collect();
                union.sort_unstable();
                union.dedup();
                assert!(is_w_compatible(&q, &union), "{name}: union not W-compatible");
                union
            } else {
                let sub: Vec<usize> =
                    (0..q.n_arrows()).filter(|_| rng.random_bool(0.3)).collect();
                if !is_w_compatible(&q, &sub) {
                    continue;
                }
                sub
            };
            let theta = random_generic_theta(&mut rng, q.n_vertices());
            assert_eq!(
                is_theta_stable(&q, &zeroed, &theta).unwrap(),
                is_theta_stable_bruteforce(&q, &zeroed, &theta).unwrap(),
                "{name}: zeroed={zeroed:?} theta={theta:?}"
            );
            samples += 1;
        }
    }
}

fn assert_perfect_matching(t: &BraneTiling, edges: &[usize]) {
    let mut white = vec![0usize; t.white.len()];
    let mut black = vec![0usize; t.black.len()];
    for &e in edges {
        white[t.edges[e].white] += 1;
        black[t.edges[e].black] += 1;
    }
    assert!(white.iter().all(|&c| c == 1), "white cover broken");
    assert!(black.iter().all(|&c| c == 1), "black cover broken");
}

#[test]
fn permanent_agrees_with_enumeration_everywhere() {
    for (name, src) in FIXTURES {
        let t = parse_tiling(src).unwrap();
        let q = dualize(&t);
        let ms = enumerate_matchings(&t);
        assert_eq!(
            count_matchings_oracle(&t).unwrap(),
            BigInt::from(ms.len()),
            "{name}"
        );
        let mut ids: Vec<&str> = ms.iter().map(|m| m.id.as_str()).collect();
        ids.dedup();
        assert_eq!(ids.len(), ms.len(), "{name}: duplicate matchings");
        for m in &ms {
            assert_perfect_matching(&t, &m.edges);
            assert!(is_w_compatible(&q, &m.edges), "{name}: {} not W-compatible", m.id);
        }
    }
    for mk in mckay_battery() {
        let ms = enumerate_matchings(&mk.tiling);
        assert_eq!(
            count_matchings_oracle(&mk.tiling).unwrap(),
            BigInt::from(ms.len()),
            "{}",
            mk.tiling.name
        );
        for m in &ms {
            assert_perfect_matching(&mk.tiling, &m.edges);
        }
    }
}

#[test]
fn hilb_stability_agrees_with_reachability_on_matchings_and_unions() {
    for mk in mckay_battery() {
        let q = &mk.quiver;
        let theta = hilb_theta(q.n_vertices());
        let ms = enumerate_matchings(&mk.tiling);
        for i in 0..ms.len() {
            for j in i..ms.len() {
                let mut union = ms[i].edges.clone();
                union.extend_from_slice(&ms[j].edges);
                union.sort_unstable();
                union.dedup();
                assert_eq!(
                    is_theta_stable(q, &union, &theta).unwrap(),
                    origin_reaches_all_oracle(q, &union),
                    "{}: union of {} and {}",
                    mk.tiling.name,
                    ms[i].id,
                    ms[j].id
                );
            }
        }
    }
}

#[test]
fn typed_characters_agree_with_lattice_characters() {
    for mk in mckay_battery() {
        let n = BigInt::from(mk.action.order());
        for m in enumerate_matchings(&mk.tiling) {
            let reduced = mk.lattice.reduced_character(&m.edges);
            let typed = mk.typed_character(&m.edges);
            for j in 0..3 {
                let group_route: BigInt = (0..3)
                    .map(|t| BigInt::from(typed[t]) * &mk.m0[j][t])
                    .sum();
                assert_eq!(
                    &reduced[j] * &n,
                    group_route,
                    "{}: matching {} coordinate {}",
                    mk.tiling.name,
                    m.id,
                    j
                );
            }
        }
    }
}

#[test]
fn fans_build_and_extremal_matchings_are_always_stable() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    // Every fixture whose diagram is well-formed (the twogon's is not).
    for (name, src) in [FIXTURES[0], FIXTURES[1], FIXTURES[2], FIXTURES[3], FIXTURES[5], FIXTURES[6]] {
        let t = parse_tiling(src).unwrap();
        let q = dualize(&t);
        let l = build_lattices(&q).unwrap();
        let ms = enumerate_matchings(&t);
        let diagram = diagram_of_center(&q, &l, &ms).unwrap();
        // Extremal ⟺ the matching's point is a hull vertex carrying only it.
        for (pi, p) in diagram.points.iter().enumerate() {
            let on_hull = diagram.hull.contains(&pi);
            for &mi in &p.matchings {
                assert_eq!(
                    is_extremal(&q, &ms[mi].edges),
                    on_hull && p.matchings.len() == 1,
                    "{name}: matching {}",
                    ms[mi].id
                );
            }
        }
        for _ in 0..25 {
            let theta = random_generic_theta(&mut rng, q.n_vertices());
            // build_triangulation re-verifies its own invariants internally
            // (point bijection, unimodularity, Euler count, hull equality,
            // sweep-vs-algebraic triangle agreement).
            let fan = build_triangulation(&t, &q, &l, &ms, &theta).unwrap();
            assert!(!fan.triangles.is_empty(), "{name}");
            for m in &ms {
                if is_extremal(&q, &m.edges) {
                    assert!(
                        is_theta_stable(&q, &m.edges, &theta).unwrap(),
                        "{name}: extremal {} unstable at {theta:?}",
                        m.id
                    );
                }
            }
        }
    }
}

#[test]
fn lp_solutions_satisfy_the_constraints_they_claim() {
    for (name, src) in FIXTURES {
        let t = parse_tiling(src).unwrap();
        let class = consistency_class(&t).unwrap();
        match name {
            "twogon" => {
                assert_eq!(class, ConsistencyClass::Inconsistent);
                assert!(find_r_charge(&t).is_err());
                continue;
            }
            "necklace" => assert_eq!(class, ConsistencyClass::ConsistentOnly),
            _ => assert_eq!(class, ConsistencyClass::Geometric, "{name}"),
        }
        let sol = find_r_charge(&t).unwrap();
        let one = num::rational::BigRational::one();
        let two = &one + &one;
        // Re-derive every constraint from the tiling itself.
        let mut white_sum = vec![num::rational::BigRational::from(BigInt::from(0)); t.white.len()];
        let mut black_sum = vec![num::rational::BigRational::from(BigInt::from(0)); t.black.len()];
        for (e, edge) in t.edges.iter().enumerate() {
            white_sum[edge.white] += &sol.r[e];
            black_sum[edge.black] += &sol.r[e];
        }
        for s in white_sum.iter().chain(&black_sum) {
            assert_eq!(s, &two, "{name}: vertex sum");
        }
        for f in &t.faces {
            let mut sum = num::rational::BigRational::from(BigInt::from(0));
            for &w in &f.word {
                sum += &sol.r[w];
            }
            let len = num::rational::BigRational::from(BigInt::from(f.word.len() as i64));
            assert_eq!(sum, &len - &two, "{name}: face {}", f.id);
        }
        let upper = if sol.class == ConsistencyClass::Geometric {
            &one - &sol.epsilon
        } else {
            one.clone()
        };
        for r in &sol.r {
            assert!(r >= &sol.epsilon, "{name}: margin below");
            assert!(r <= &upper, "{name}: margin above");
        }
        assert!(sol.epsilon > num::rational::BigRational::from(BigInt::from(0)));
    }
}
