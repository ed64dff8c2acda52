//! Randomized invariants of the polynomial layer and the enumerators.

use fanocheck::conditions::{holds_dagger, holds_star, holds_star_k, shortcut_star, shortcut_star_k};
use fanocheck::poly::{PolyMatrix, SparsePoly};
use fanocheck::wps::{enumerate_monomials, partition_by_weight_one, Monomial, Stratum, WeightSystem};
use proptest::prelude::*;

fn arb_char() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7])
}

fn arb_poly(arity: usize, p: u32) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..5, arity), -6i64..7),
        0..6,
    )
    .prop_map(move |terms| {
        let mut f = SparsePoly::zero(p, arity);
        for (e, c) in terms {
            f = f.add(&SparsePoly::monomial(p, e, c)).unwrap();
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws((_p, a, b, c) in arb_char().prop_flat_map(|p| {
        (Just(p), arb_poly(3, p), arb_poly(3, p), arb_poly(3, p))
    })) {
        prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(
            a.add(&b).unwrap().add(&c).unwrap(),
            a.add(&b.add(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
        prop_assert_eq!(
            a.mul(&b.add(&c).unwrap()).unwrap(),
            a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
        );
    }

    #[test]
    fn freshman_dream((p, f, g) in arb_char().prop_flat_map(|p| {
        (Just(p), arb_poly(3, p), arb_poly(3, p))
    })) {
        let lhs = f.add(&g).unwrap().pow(p).unwrap();
        let rhs = f.pow(p).unwrap().add(&g.pow(p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pth_power_has_zero_derivative((p, f) in arb_char().prop_flat_map(|p| {
        (Just(p), arb_poly(3, p))
    })) {
        let fp = f.pow(p).unwrap();
        for i in 0..3 {
            prop_assert!(fp.partial_derivative(i).unwrap().is_zero());
        }
    }

    #[test]
    fn restriction_commutes_with_determinant(
        (_p, entries, on) in arb_char().prop_flat_map(|p| {
            (
                Just(p),
                prop::collection::vec(arb_poly(3, p), 9),
                prop::collection::vec(0usize..3, 1..3),
            )
        })
    ) {
        let stratum = Stratum::new(on).unwrap();
        let rows: Vec<Vec<SparsePoly>> =
            entries.chunks(3).map(|c| c.to_vec()).collect();
        let m = PolyMatrix::new(rows).unwrap();
        let det_then_restrict = m.determinant().unwrap().restrict_to_stratum(&stratum);
        let restrict_then_det = m.restrict_to_stratum(&stratum).determinant().unwrap();
        prop_assert_eq!(det_then_restrict, restrict_then_det);
    }

    #[test]
    fn euler_relation(
        (p, weights, picks) in arb_char().prop_flat_map(|p| {
            (
                Just(p),
                prop::collection::vec(1u32..5, 3),
                prop::collection::vec(any::<prop::sample::Index>(), 1..5),
            )
        }),
        d in 1u64..20
    ) {
        let ws = WeightSystem::new(weights).unwrap();
        let all = enumerate_monomials(&ws, d);
        prop_assume!(!all.is_empty());
        let mut f = SparsePoly::zero(p, 3);
        for (i, pick) in picks.iter().enumerate() {
            let m = &all[pick.index(all.len())];
            f = f.add(&SparsePoly::monomial(p, m.0.clone(), 1 + i as i64)).unwrap();
        }
        let mut acc = SparsePoly::zero(p, 3);
        for i in 0..3 {
            let mut unit = vec![0u32; 3];
            unit[i] = 1;
            let xi = SparsePoly::monomial(p, unit, ws.weight(i) as i64);
            acc = acc.add(&xi.mul(&f.partial_derivative(i).unwrap()).unwrap()).unwrap();
        }
        prop_assert_eq!(acc, f.scale((d % p as u64) as i64));
    }

    #[test]
    fn enumerated_monomials_have_exact_degree(
        weights in prop::collection::vec(1u32..7, 2..5),
        d in 0u64..40
    ) {
        let ws = WeightSystem::new(weights).unwrap();
        for m in enumerate_monomials(&ws, d) {
            prop_assert_eq!(ws.degree(&m), d);
        }
    }

    #[test]
    fn partition_is_complementary(weights in prop::collection::vec(1u32..9, 2..6)) {
        let ws = WeightSystem::new(weights).unwrap();
        let (ones, many) = partition_by_weight_one(&ws);
        let mut union = ones.clone();
        union.extend(&many);
        union.sort_unstable();
        prop_assert_eq!(union, (0..ws.arity()).collect::<Vec<_>>());
        prop_assert!(ones.iter().all(|&i| ws.weight(i) == 1));
        prop_assert!(many.iter().all(|&i| ws.weight(i) > 1));
    }

    #[test]
    fn restriction_matches_sub_enumeration(
        weights in prop::collection::vec(1u32..6, 3..5),
        on_bits in prop::collection::vec(any::<bool>(), 3..5),
        d in 0u64..25
    ) {
        let ws = WeightSystem::new(weights).unwrap();
        let on: Vec<usize> = (0..ws.arity())
            .filter(|&i| *on_bits.get(i).unwrap_or(&false))
            .collect();
        prop_assume!(on.len() >= 2);
        let sub = ws.restrict(&on).unwrap();
        let restricted: Vec<Vec<u32>> = enumerate_monomials(&ws, d)
            .into_iter()
            .filter(|m| m.is_supported_on(&on))
            .map(|m| on.iter().map(|&i| m.0[i]).collect())
            .collect();
        let direct: Vec<Vec<u32>> =
            enumerate_monomials(&sub, d).into_iter().map(|m| m.0).collect();
        prop_assert_eq!(restricted, direct);
    }

    #[test]
    fn dagger_is_monotone(
        (weights, d, p) in (prop::collection::vec(1u32..5, 4), 4u64..16, arb_char()),
        keep in prop::collection::vec(any::<bool>(), 64),
        on in prop::collection::vec(0usize..4, 1..3)
    ) {
        let ws = WeightSystem::new(weights).unwrap();
        let all = enumerate_monomials(&ws, d);
        let small: Vec<Monomial> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| *keep.get(*i).unwrap_or(&false))
            .map(|(_, m)| m.clone())
            .collect();
        prop_assume!(!small.is_empty());
        let stratum = Stratum::new(on).unwrap();
        if holds_dagger(&small, &stratum, p).holds {
            prop_assert!(holds_dagger(&all, &stratum, p).holds);
        }
    }

    #[test]
    fn shortcut_rules_are_sound(
        (weights, d, p) in (prop::collection::vec(1u32..5, 4), 4u64..16, arb_char()),
        keep in prop::collection::vec(any::<bool>(), 64),
        on in prop::collection::vec(0usize..4, 1..3),
        k in 0usize..4
    ) {
        let ws = WeightSystem::new(weights).unwrap();
        let lambda: Vec<Monomial> = enumerate_monomials(&ws, d)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| *keep.get(*i).unwrap_or(&false))
            .map(|(_, m)| m)
            .collect();
        let stratum = Stratum::new(on).unwrap();
        if shortcut_star(&lambda, &stratum, p).unwrap().is_some() {
            prop_assert!(holds_star(&lambda, &stratum, p).holds);
        }
        if !stratum.contains(k) || stratum.len() < 3 {
            if shortcut_star_k(&lambda, &stratum, k, p).unwrap().is_some() {
                prop_assert!(holds_star_k(&lambda, &stratum, k, p).holds);
            }
        }
    }
}

/// Cardinality of the enumeration against an independent counting
/// route (a knapsack table), exhaustively over every small weight
/// system.
#[test]
fn enumeration_cardinality_matches_counting_oracle() {
    fn count(weights: &[u32], d: usize) -> u64 {
        // ways[r] = number of exponent vectors of weighted degree r
        let mut ways = vec![0u64; d + 1];
        ways[0] = 1;
        for &a in weights {
            let mut next = vec![0u64; d + 1];
            for r in 0..=d {
                if ways[r] == 0 {
                    continue;
                }
                let mut s = r;
                loop {
                    next[s] += ways[r];
                    s += a as usize;
                    if s > d {
                        break;
                    }
                }
            }
            ways = next;
        }
        ways[d]
    }

    fn systems(max_sum: u32, len: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(rem: u32, len: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if cur.len() == len {
                out.push(cur.clone());
                return;
            }
            for a in 1..=rem.saturating_sub((len - cur.len() - 1) as u32) {
                cur.push(a);
                rec(rem - a, len, cur, out);
                cur.pop();
            }
        }
        rec(max_sum, len, &mut cur, &mut out);
        out
    }

    let mut checked = 0u64;
    for len in 2..=5 {
        for ws in systems(12, len) {
            let system = WeightSystem::new(ws.clone()).unwrap();
            for d in 0..=30u64 {
                let got = enumerate_monomials(&system, d).len() as u64;
                assert_eq!(got, count(&ws, d as usize), "ws {ws:?} degree {d}");
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000, "swept {checked} cases");
}

/// Whenever a certificate check succeeds, the numeric rank of the full
/// bordered matrix at sampled stratum points is at least the stratum
/// size.
#[test]
fn certificates_imply_pointwise_rank() {
    use fanocheck::conditions::check_witness;
    use fanocheck::oracle::oracle_rank_at_points;
    use rand::{Rng, SeedableRng};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5150);
    let mut confirmed = 0;
    for _ in 0..200 {
        let weights: Vec<u32> = (0..4).map(|_| rng.gen_range(1..5)).collect();
        let d = rng.gen_range(4..14u64);
        let p = [2u32, 3, 5][rng.gen_range(0..3)];
        let ws = WeightSystem::new(weights).unwrap();
        let lambda: Vec<Monomial> =
            enumerate_monomials(&ws, d).into_iter().filter(|_| rng.gen_bool(0.6)).collect();
        let on: Vec<usize> = match rng.gen_range(1..3usize) {
            1 => vec![rng.gen_range(0..4)],
            _ => {
                let a = rng.gen_range(0..4usize);
                let b = (a + rng.gen_range(1..4usize)) % 4;
                vec![a.min(b), a.max(b)]
            }
        };
        let stratum = Stratum::new(on.clone()).unwrap();
        let found = holds_dagger(&lambda, &stratum, p);
        let Some(cert) = found.certificate else { continue };
        // the found certificate re-checks, and the sampled rank agrees
        assert!(check_witness(&lambda, &cert, p).unwrap().holds);
        let e = if p == 2 { 3 } else { 2 };
        let rank = oracle_rank_at_points(&lambda, &stratum, p, e, 25, 11);
        assert!(rank >= on.len(), "ws {:?} d {d} p {p} stratum {on:?}", ws.weights());
        confirmed += 1;
    }
    assert!(confirmed > 40, "only {confirmed} instances produced certificates");
}

/// The pair rule on `x_k^a x_i` and `x_i^b` needs `b - 1` prime to the
/// characteristic; at the boundary it must not fire.
#[test]
fn shortcut_star_k_rejects_divisible_exponent() {
    use fanocheck::conditions::{shortcut_star_k, StarKRule};
    // x_k^2 x_i and x_i^3 with p = 2: b - 1 = 2 is even, so the pair
    // rule is unavailable and no other pattern exists
    let lambda = vec![Monomial(vec![0, 1, 2, 0]), Monomial(vec![0, 3, 0, 0])];
    let stratum = Stratum::new(vec![1, 2]).unwrap();
    let got = shortcut_star_k(&lambda, &stratum, 2, 2).unwrap();
    assert_eq!(got, None);
    // with p = 3 the same data fires the rule
    let got = shortcut_star_k(&lambda, &stratum, 2, 3).unwrap();
    assert_eq!(got, Some(StarKRule::R3d));
    assert!(holds_star_k(&lambda, &stratum, 2, 3).holds);
}

/// The searches return byte-identical certificates run over run.
#[test]
fn search_is_deterministic() {
    let ws = WeightSystem::new(vec![1, 2, 2, 3]).unwrap();
    let lambda = enumerate_monomials(&ws, 14);
    for on in [vec![1], vec![1, 2], vec![1, 2, 3]] {
        let s = Stratum::new(on).unwrap();
        let a = holds_star(&lambda, &s, 2);
        let b = holds_star(&lambda, &s, 2);
        assert_eq!(a, b);
        let a = holds_star_k(&lambda, &s, 0, 2);
        let b = holds_star_k(&lambda, &s, 0, 2);
        assert_eq!(a, b);
    }
}
