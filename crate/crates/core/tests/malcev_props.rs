use nilprob::group::{Caps, Group};
use nilprob::malcev::MalcevGroup;
use num_bigint::BigInt;
use proptest::prelude::*;

fn elem(m: usize) -> impl Strategy<Value = Vec<BigInt>> {
    prop::collection::vec(-40i64..40, m).prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn heisenberg_axioms(a in elem(3), b in elem(3), c in elem(3)) {
        let h = MalcevGroup::heisenberg();
        prop_assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
        prop_assert_eq!(h.mul(&a, &h.inv(&a)), h.identity());
        prop_assert_eq!(h.mul(&h.identity(), &b), b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn ut4_axioms_and_powers(a in elem(6), b in elem(6), c in elem(6), n in -6i64..6, m in -6i64..6) {
        let g = MalcevGroup::ut4();
        prop_assert_eq!(g.mul(&g.mul(&a, &b), &c), g.mul(&a, &g.mul(&b, &c)));
        let pn = g.mal_pow(&a, &BigInt::from(n)).unwrap();
        let pm = g.mal_pow(&a, &BigInt::from(m)).unwrap();
        prop_assert_eq!(g.mul(&pn, &pm), g.mal_pow(&a, &BigInt::from(n + m)).unwrap());
        prop_assert_eq!(pn, g.pow(&a, n));
    }

}

#[test]
fn quotient_maps_are_homomorphisms() {
    use rand::Rng;
    let mut rng = nilprob::sampling::trial_rng(6, 0);
    for (g, moduli) in [(MalcevGroup::heisenberg(), vec![3u64, 5, 7, 9]), (MalcevGroup::zn(2), vec![4, 6]), (MalcevGroup::ut4(), vec![5])] {
        for n in moduli {
            let q = g.finite_quotient(n, &Caps::default()).unwrap();
            for _ in 0..300 {
                let a: Vec<BigInt> = (0..g.m).map(|_| BigInt::from(rng.gen_range(-50..50))).collect();
                let b: Vec<BigInt> = (0..g.m).map(|_| BigInt::from(rng.gen_range(-50..50))).collect();
                let ab = g.mul(&a, &b);
                assert_eq!(q.mul(g.quotient_index(&a, n), g.quotient_index(&b, n)), g.quotient_index(&ab, n), "{} mod {n}", g.name);
            }
        }
    }
}

#[test]
fn fast_arithmetic_agrees_with_bigint() {
    let h = MalcevGroup::heisenberg();
    let fast = h.fast().unwrap();
    let mut rng = nilprob::sampling::trial_rng(5, 0);
    use rand::Rng;
    for _ in 0..2000 {
        let a: Vec<i128> = (0..3).map(|_| rng.gen_range(-1000..1000)).collect();
        let b: Vec<i128> = (0..3).map(|_| rng.gen_range(-1000..1000)).collect();
        let big = h.mul(&nilprob::malcev::FastMalcev::to_big(&a), &nilprob::malcev::FastMalcev::to_big(&b));
        assert_eq!(nilprob::malcev::FastMalcev::to_big(&fast.mul(&a, &b)), big);
        assert_eq!(nilprob::malcev::FastMalcev::to_big(&fast.inv(&a)), h.inv(&nilprob::malcev::FastMalcev::to_big(&a)));
    }
}
