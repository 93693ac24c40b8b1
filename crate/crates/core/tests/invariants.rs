use std::sync::OnceLock;

use affine_fusion::liealg::{algebra_data, AlgebraId};
use affine_fusion::ring::Ring;
use affine_fusion::symmetries::{galois_action, galois_elements};
use affine_fusion::weights::Weight;
use proptest::prelude::*;

const ALGEBRAS: &[&str] = &["A1", "A3", "B3", "C2", "D4", "D5", "E6", "E7", "E8", "F4", "G2"];

fn algebra(i: usize) -> AlgebraId {
    ALGEBRAS[i].parse().unwrap()
}

fn arb_vector() -> impl Strategy<Value = (usize, Vec<i64>, i64)> {
    (0..ALGEBRAS.len(), 5i64..40).prop_flat_map(|(a, kappa)| {
        let r = algebra(a).rank();
        (Just(a), prop::collection::vec(-25i64..25, r), Just(kappa))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reflection_flips_fold_sign((a, v, kappa) in arb_vector()) {
        let alg = algebra_data(algebra(a));
        let base = alg.affine_fold(kappa, &v).unwrap();
        for i in 0..=alg.rank() {
            let mut w = v.clone();
            if i == 0 {
                alg.reflect_affine(&mut w, &kappa);
            } else {
                alg.reflect(&mut w, i);
            }
            let moved = alg.affine_fold(kappa, &w).unwrap();
            prop_assert_eq!(moved.det_sign, -base.det_sign);
            if base.det_sign != 0 {
                prop_assert_eq!(&moved.weight, &base.weight);
            }
        }
    }

    #[test]
    fn folding_is_idempotent((a, v, kappa) in arb_vector()) {
        let alg = algebra_data(algebra(a));
        let once = alg.affine_fold(kappa, &v).unwrap();
        prop_assume!(once.det_sign != 0);
        let shifted: Vec<i64> = once.weight.iter().map(|x| x + 1).collect();
        let twice = alg.affine_fold(kappa, &shifted).unwrap();
        prop_assert_eq!(twice.det_sign, 1);
        prop_assert!(twice.reflections.is_empty());
        prop_assert_eq!(twice.weight, once.weight);

        let fin = alg.finite_fold(&v).unwrap();
        if fin.det_sign != 0 {
            let again = alg.finite_fold(&fin.weight).unwrap();
            prop_assert_eq!(again.det_sign, 1);
            prop_assert_eq!(again.weight, fin.weight);
        }
    }

    #[test]
    fn weight_names_round_trip(v in prop::collection::vec(0i64..5, 1..9)) {
        let w = Weight(v.clone());
        prop_assert_eq!(Weight::parse(&w.pretty(), v.len()).unwrap(), w.clone());
        prop_assert_eq!(Weight::parse(&w.to_string(), v.len()).unwrap(), w);
    }
}

fn rings() -> &'static Vec<Ring> {
    static R: OnceLock<Vec<Ring>> = OnceLock::new();
    R.get_or_init(|| {
        ["A2k3", "B3k2", "C2k3", "D4k2", "E6k2", "F4k2", "G2k3"].iter().map(|s| Ring::parse(s, None).unwrap()).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn fusion_ring_axioms(ri in 0usize..7, x in any::<prop::sample::Index>(), y in any::<prop::sample::Index>(), z in any::<prop::sample::Index>()) {
        let r = &rings()[ri];
        let n = r.len();
        let (a, b, c) = (x.index(n), y.index(n), z.index(n));
        let t = &r.table;
        prop_assert_eq!(t.get(a, b, c), t.get(b, a, c));
        prop_assert_eq!(t.get(a, 0, c), u32::from(a == c));
        prop_assert_eq!(t.get(a, b, 0), u32::from(b == r.conj.apply(a)));
        // N_ab^c = N_{a Cc}^{Cb}
        prop_assert_eq!(t.get(a, b, c), t.get(a, r.conj.apply(c), r.conj.apply(b)));
        let dsum: f64 = t.product(a, b).iter().map(|&(c, m)| m as f64 * r.s.qdim(c as usize)).sum();
        prop_assert!((dsum - r.s.qdim(a) * r.s.qdim(b)).abs() < 1e-8);
    }

    #[test]
    fn galois_actions_are_permutations(ri in 0usize..7, pick in any::<prop::sample::Index>()) {
        let r = &rings()[ri];
        let ells = galois_elements(&r.ctx);
        let ell = ells[pick.index(ells.len())];
        let g = galois_action(&r.ctx, ell).unwrap();
        prop_assert_eq!(g.perm.len(), r.len());
        prop_assert!(g.signs.iter().all(|s| *s == 1 || *s == -1));
        // D(0^(l)) >= 1 with equality exactly on currents
        let d = r.s.qdim(g.perm.apply(0));
        prop_assert!(d > 1.0 - 1e-9);
    }
}
