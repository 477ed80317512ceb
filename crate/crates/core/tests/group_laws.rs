use nilprob::group::{corpus, FiniteGroup, Group};
use nilprob::nildegree::{dc_k_exact, p_k_exact, rational};
use num_rational::BigRational;
use proptest::prelude::*;

fn small_groups() -> Vec<(String, FiniteGroup)> {
    ["sym3", "sym4", "dih8", "q8", "dic12", "alt4", "es27", "es27b", "dih10", "s3xs3"]
        .iter()
        .map(|n| (n.to_string(), corpus::builtin(n).unwrap()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn commutator_identities(gi in 0usize..10, a in 0usize..10_000, b in 0usize..10_000, c in 0usize..10_000) {
        let (_, g) = &small_groups()[gi];
        let (x, y, z) = (a % g.order(), b % g.order(), c % g.order());
        prop_assert_eq!(g.inv(g.comm(x, y)), g.comm(y, x));
        // x^y = x [x, y]
        prop_assert_eq!(g.conj(x, y), g.mul(x, g.comm(x, y)));
        // [xy, z] = [x, z]^y [y, z]
        prop_assert_eq!(g.comm(g.mul(x, y), z), g.mul(g.conj(g.comm(x, z), y), g.comm(y, z)));
        // Hall-Witt: [x, y⁻¹, z]^y [y, z⁻¹, x]^z [z, x⁻¹, y]^x = 1
        let hw = |x: usize, y: usize, z: usize| g.conj(g.comm(g.comm(x, g.inv(y)), z), y);
        prop_assert_eq!(g.mul(g.mul(hw(x, y, z), hw(y, z, x)), hw(z, x, y)), 0);
        prop_assert_eq!(g.simple_commutator(&[x, y, z]), g.comm(g.comm(x, y), z));
    }
}

#[test]
fn dc_is_monotone_in_k() {
    for (name, g) in small_groups() {
        let values: Vec<BigRational> = (0..=3).map(|k| dc_k_exact(&g, k)).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]), "{name}: {values:?}");
        assert_eq!(values[0], rational(1u32, g.order() as u64), "{name}");
    }
}

#[test]
fn dc_one_counts_conjugacy_classes() {
    for (name, g) in small_groups() {
        let classes = g.conjugacy_classes().len();
        assert_eq!(dc_k_exact(&g, 1), rational(classes as u64, g.order() as u64), "{name}");
    }
}

#[test]
fn dc_is_multiplicative_on_direct_products() {
    let pairs = [("sym3", "dih8"), ("q8", "c3"), ("sym3", "sym3")];
    for (a, b) in pairs {
        let (g, h) = (corpus::builtin(a).unwrap(), corpus::builtin(b).unwrap());
        let gh = g.direct_product(&h);
        for k in 1..=2 {
            assert_eq!(dc_k_exact(&gh, k), dc_k_exact(&g, k) * dc_k_exact(&h, k), "{a} x {b}, k = {k}");
        }
    }
}

#[test]
fn commutator_values_sum_to_one() {
    for (name, g) in small_groups() {
        for k in 1..=2 {
            let total: BigRational = (0..g.order()).map(|x| p_k_exact(&g, x, k).unwrap()).sum();
            assert_eq!(total, rational(1u32, 1u32), "{name}, k = {k}");
        }
    }
}

#[test]
fn axioms_hold_for_the_corpus() {
    for (name, g) in corpus::standard(729) {
        g.check_axioms().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}
