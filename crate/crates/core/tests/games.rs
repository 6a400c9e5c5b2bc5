//! Classifiers, strategies and the sampler against exhaustive search and
//! structural invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use xorgame::classify::{classify_dual, classify_hnf, classify_snf, cross_check, decide};
use xorgame::game::{
    defining_system, derive_seed, format_game, parse_game, sample_random_game, Clause, Dedup,
    XorGame,
};
use xorgame::linalg::{mul_rational, RationalVector};
use xorgame::strategy::{
    classical_score, is_perfect_merp, merp_score, simulate_merp, ClassicalStrategy, MerpStrategy,
};

fn game(max_n: usize, max_m: usize) -> impl Strategy<Value = XorGame> {
    (1..=max_n, 1..=max_m, any::<u64>(), any::<bool>()).prop_filter_map(
        "clause space too small",
        |(n, m, seed, full)| {
            let dedup = if full { Dedup::FullTuple } else { Dedup::Triple };
            sample_random_game(n, m, seed, dedup).ok()
        },
    )
}

fn brute_force_c_perfect(g: &XorGame) -> bool {
    let cols: Vec<[usize; 3]> = g.clauses().iter().map(|c| c.columns(g.n())).collect();
    (0u32..1 << g.unknowns()).any(|x| {
        cols.iter()
            .zip(g.clauses())
            .all(|([a, b, c], cl)| ((x >> a) ^ (x >> b) ^ (x >> c)) & 1 == u32::from(cl.s))
    })
}

fn rational_vec() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-16i64..=16, 1i64..=8), 1..=30)
}

fn to_z(parts: &[(i64, i64)], len: usize) -> RationalVector {
    RationalVector(
        (0..len)
            .map(|i| {
                let (p, q) = parts[i % parts.len()];
                BigRational::new(p.into(), q.into())
            })
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn classifiers_agree_with_exhaustive_search(g in game(4, 10)) {
        let hnf = classify_hnf(&g);
        prop_assert_eq!(hnf.verdict(), classify_snf(&g).verdict());
        prop_assert_eq!(hnf.verdict(), classify_dual(&g).verdict());
        prop_assert_eq!(hnf.verdict(), decide(&g));
        prop_assert_eq!(hnf.c_perfect, brute_force_c_perfect(&g));
        prop_assert!(hnf.q_perfect || !hnf.c_perfect);
    }

    #[test]
    fn extracted_strategies_are_perfect(g in game(12, 40)) {
        let sys = defining_system(&g);
        for c in [classify_hnf(&g), classify_snf(&g)] {
            prop_assert_eq!(c.merp.is_some(), c.q_perfect);
            prop_assert_eq!(c.classical.is_some(), c.c_perfect);
            if let Some(z) = c.merp {
                for (lhs, &s) in mul_rational(&sys.gamma, &z).iter().zip(&sys.s_vec) {
                    let d = lhs - BigRational::from_integer(BigInt::from(s));
                    prop_assert!(d.is_integer() && !d.numer().bit(0));
                }
                let strat = MerpStrategy::new(z);
                prop_assert!(is_perfect_merp(&g, &strat).unwrap());
                prop_assert_eq!(merp_score(&g, &strat).unwrap(), 1.0);
                for p in simulate_merp(&g, &strat).unwrap() {
                    prop_assert!(p >= 1.0 - 1e-9);
                }
            }
            if let Some(x) = c.classical {
                let strat = ClassicalStrategy::new(x).unwrap();
                prop_assert_eq!(classical_score(&g, &strat).unwrap(), BigRational::from_integer(1.into()));
            }
        }
    }

    #[test]
    fn deleting_clauses_preserves_perfection(g in game(6, 20), k in any::<prop::sample::Index>()) {
        let v = decide(&g);
        if let Some(sub) = g.without_clause(k.index(g.m())) {
            let w = decide(&sub);
            prop_assert!(!v.q_perfect || w.q_perfect);
            prop_assert!(!v.c_perfect || w.c_perfect);
        }
    }

    #[test]
    fn clause_order_is_irrelevant(g in game(6, 20), shuffle in any::<prop::sample::Index>()) {
        let m = g.m();
        let r = shuffle.index(m.max(1));
        let perm: Vec<usize> = (0..m).map(|i| (i * (2 * r + 1) + r) % m).collect();
        prop_assume!({
            let mut p = perm.clone();
            p.sort_unstable();
            p.dedup();
            p.len() == m
        });
        let h = g.permuted(&perm);
        prop_assert_eq!(cross_check(&g).unwrap().verdict(), cross_check(&h).unwrap().verdict());
    }

    #[test]
    fn score_invariant_under_even_shifts(
        g in game(5, 15),
        parts in rational_vec(),
        j in any::<prop::sample::Index>(),
        k in -3i64..=3,
    ) {
        let z = to_z(&parts, g.unknowns());
        let mut shifted = z.clone();
        let j = j.index(g.unknowns());
        shifted.0[j] += BigRational::from_integer(BigInt::from(2 * k));
        let a = merp_score(&g, &MerpStrategy::new(z)).unwrap();
        let b = merp_score(&g, &MerpStrategy::new(shifted)).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn simulator_matches_closed_form(g in game(5, 15), parts in rational_vec()) {
        let strat = MerpStrategy::new(to_z(&parts, g.unknowns()));
        let probs = simulate_merp(&g, &strat).unwrap();
        prop_assert_eq!(probs.len(), g.m());
        let mean = probs.iter().sum::<f64>() / probs.len() as f64;
        prop_assert!((mean - merp_score(&g, &strat).unwrap()).abs() < 1e-9);
        for p in probs {
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
        }
    }

    #[test]
    fn classical_and_merp_scores_coincide_on_bits(
        g in game(5, 15),
        bits in prop::collection::vec(0u8..=1, 15),
    ) {
        let x = bits[..g.unknowns()].to_vec();
        let cs = ClassicalStrategy::new(x).unwrap();
        let exact = classical_score(&g, &cs).unwrap();
        let approx = merp_score(&g, &cs.as_merp()).unwrap();
        prop_assert!((approx - num_traits::ToPrimitive::to_f64(&exact).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn perfection_tests_agree(g in game(5, 15), parts in rational_vec(), perfect in any::<bool>()) {
        // half the cases use an extracted perfect strategy when there is one
        let z = match classify_hnf(&g).merp {
            Some(z) if perfect => z,
            _ => to_z(&parts, g.unknowns()),
        };
        let strat = MerpStrategy::new(z);
        let exact = is_perfect_merp(&g, &strat).unwrap();
        let score = merp_score(&g, &strat).unwrap();
        let simulated = simulate_merp(&g, &strat).unwrap().iter().all(|&p| p >= 1.0 - 1e-9);
        prop_assert_eq!(exact, (score - 1.0).abs() < 1e-12);
        prop_assert_eq!(exact, simulated);
    }

    #[test]
    fn game_files_round_trip(g in game(20, 60)) {
        let text = format_game(&g, Some("round trip"));
        prop_assert_eq!(parse_game(&text).unwrap(), g);
    }

    #[test]
    fn sampler_respects_dedup_mode(n in 1usize..6, m in 1usize..40, seed in any::<u64>(), full in any::<bool>()) {
        let dedup = if full { Dedup::FullTuple } else { Dedup::Triple };
        if let Ok(g) = sample_random_game(n, m, seed, dedup) {
            prop_assert_eq!(g.m(), m);
            let mut keys: Vec<_> = g
                .clauses()
                .iter()
                .map(|c| if full { *c } else { Clause::new(c.a, c.b, c.c, 0) })
                .collect();
            keys.sort_unstable();
            keys.dedup();
            prop_assert_eq!(keys.len(), m);
            prop_assert_eq!(sample_random_game(n, m, seed, dedup).unwrap(), g);
        } else {
            prop_assert!(m as u128 > dedup.capacity(n));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn fast_decider_matches_hermite_near_threshold(
        n in 8usize..=24,
        ratio in 2.3f64..3.2,
        seed in any::<u64>(),
    ) {
        let m = (ratio * n as f64).round() as usize;
        let g = sample_random_game(n, m, seed, Dedup::Triple).unwrap();
        prop_assert_eq!(decide(&g), classify_hnf(&g).verdict());
    }
}

#[test]
fn classical_and_merp_scores_coincide_exhaustively() {
    for seed in 0..20 {
        for n in 1usize..=3 {
            let m = (seed as usize % n.pow(3)) + 1;
            let g = sample_random_game(n, m, seed, Dedup::Triple).unwrap();
            for mask in 0u32..1 << (3 * n) {
                let x: Vec<u8> = (0..3 * n).map(|j| ((mask >> j) & 1) as u8).collect();
                let cs = ClassicalStrategy::new(x).unwrap();
                let exact = num_traits::ToPrimitive::to_f64(&classical_score(&g, &cs).unwrap()).unwrap();
                assert!((merp_score(&g, &cs.as_merp()).unwrap() - exact).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn sampler_marginals_are_uniform() {
    // each coordinate of a clause, and its parity, is uniform; 5σ bands
    let (n, m, games) = (5usize, 20usize, 4000u64);
    let mut counts = vec![[0u64; 5]; 3];
    let mut odd = 0u64;
    for t in 0..games {
        let g = sample_random_game(n, m, derive_seed(11, n, m, t), Dedup::Triple).unwrap();
        for c in g.clauses() {
            counts[0][c.a - 1] += 1;
            counts[1][c.b - 1] += 1;
            counts[2][c.c - 1] += 1;
            odd += u64::from(c.s);
        }
    }
    let total = (games as usize * m) as f64;
    let check = |observed: u64, p: f64| {
        let sd = (total * p * (1.0 - p)).sqrt();
        assert!((observed as f64 - total * p).abs() < 5.0 * sd, "{observed} vs {}", total * p);
    };
    for player in &counts {
        for &c in player {
            check(c, 1.0 / n as f64);
        }
    }
    check(odd, 0.5);
}

#[test]
fn dense_sampling_covers_the_space() {
    // m at full capacity must return every triple exactly once
    let g = sample_random_game(3, 27, 5, Dedup::Triple).unwrap();
    let mut triples: Vec<_> = g.clauses().iter().map(|c| (c.a, c.b, c.c)).collect();
    triples.sort_unstable();
    triples.dedup();
    assert_eq!(triples.len(), 27);
}
