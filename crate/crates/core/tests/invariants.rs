use num_bigint::BigUint;
use proptest::prelude::*;

use nstrees::series::{phi_uncached, PhiCache};
use nstrees::spectral::{bilinear_b, make_initial, sup_norm, Grid, GridSpec, InitialKind};
use nstrees::treelib::{decode, enumerate, factorial, graft, graft2, homogeneity, symmetry, Tree};

fn trees_upto(n: usize) -> Vec<Tree> {
    enumerate(n).unwrap().into_iter().flatten().collect()
}

fn small_grid() -> Grid {
    Grid::new(GridSpec::new(3.0, 7, 1.0, 9, 2.0).unwrap()).unwrap()
}

fn any_tree(max: usize) -> impl Strategy<Value = Tree> {
    let all = trees_upto(max);
    (0..all.len()).prop_map(move |i| all[i].clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn encoding_round_trips(t in any_tree(10)) {
        let back = decode(t.encode()).unwrap();
        prop_assert_eq!(back.encode(), t.encode());
        prop_assert_eq!(back.size(), t.size());
    }

    #[test]
    fn graft_ignores_child_order(a in any_tree(6), b in any_tree(6)) {
        let ab = graft(&[a.clone(), b.clone()]).unwrap();
        let ba = graft(&[b.clone(), a.clone()]).unwrap();
        prop_assert_eq!(ab.encode(), ba.encode());
        prop_assert_eq!(ab.size(), a.size() + b.size() + 1);
        prop_assert_eq!(homogeneity(&ab), homogeneity(&a) + homogeneity(&b));
    }

    #[test]
    fn symmetry_of_distinct_pair_is_product(a in any_tree(5), b in any_tree(5)) {
        prop_assume!(a.encode() != b.encode());
        prop_assert_eq!(symmetry(&graft2(&a, &b)), symmetry(&a) * symmetry(&b));
    }

    #[test]
    fn tree_factorial_divides_size_factorial(t in any_tree(10)) {
        let n_fact = (1..=t.size()).fold(BigUint::from(1u32), |a, k| a * BigUint::from(k));
        prop_assert_eq!(n_fact % factorial(&t), BigUint::from(0u32));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bilinear_is_linear_in_first_argument(s1 in 0u64..1000, s2 in 0u64..1000, s3 in 0u64..1000, a in -2.0f64..2.0) {
        let g = small_grid();
        let c1 = make_initial(&g, InitialKind::RandomDivfree, 0.3, s1).unwrap();
        let c2 = make_initial(&g, InitialKind::RandomDivfree, 0.7, s2).unwrap();
        let d = make_initial(&g, InitialKind::RandomDivfree, 0.5, s3).unwrap();
        let mut mixed = c1.clone();
        mixed.axpy(a, &c2).unwrap();
        let lhs = bilinear_b(&mixed, &d).unwrap();
        let mut rhs = bilinear_b(&c1, &d).unwrap();
        rhs.axpy(a, &bilinear_b(&c2, &d).unwrap()).unwrap();
        let scale = sup_norm(&lhs).max(sup_norm(&rhs)).max(1e-300);
        prop_assert!(sup_norm(&lhs.sub(&rhs).unwrap()) <= 1e-12 * scale);
    }

    #[test]
    fn datum_has_requested_norm(seed in 0u64..10_000, amp in 0.01f64..3.0) {
        let g = small_grid();
        let h = make_initial(&g, InitialKind::RandomDivfree, amp, seed).unwrap();
        prop_assert!((sup_norm(&h) - amp).abs() <= 1e-12 * amp);
        prop_assert!(h.satisfies_invariants(1e-12));
    }

    #[test]
    fn memo_is_transparent(t in any_tree(5), seed in 0u64..1000) {
        let g = small_grid();
        let h = make_initial(&g, InitialKind::RandomDivfree, 0.2, seed).unwrap();
        let cache = PhiCache::new(&h);
        for sub in trees_upto(3) {
            cache.phi(&sub).unwrap();
        }
        let cached = cache.phi(&t).unwrap();
        let direct = phi_uncached(&t, &h).unwrap();
        for (a, b) in cached.frames().iter().zip(direct.frames()) {
            prop_assert_eq!(a.values(), b.values());
        }
    }
}
