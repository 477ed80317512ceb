use nilprob::genericity::{
    core_graph, delzant_condition, genericity_sweep, is_free_basis, stallings_rank, FreeWord,
};
use proptest::prelude::*;

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = FreeWord> {
    let r = rank as i32;
    prop::collection::vec((1..=r).prop_flat_map(|g| prop::sample::select(vec![g, -g])), 0..max_len)
        .prop_map(move |ls| FreeWord::new(rank, &ls).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn word_metric(a in word(2, 12), b in word(2, 12), c in word(2, 12)) {
        prop_assert_eq!(a.dist(&b), a.inv().mul(&b).len());
        prop_assert_eq!(a.dist(&b), b.dist(&a));
        prop_assert!(a.dist(&c) <= a.dist(&b) + b.dist(&c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.mul(&a.inv()).is_empty());
    }

    #[test]
    fn rank_is_invariant_under_nielsen_moves(a in word(3, 8), b in word(3, 8), c in word(3, 8)) {
        let t = vec![a.clone(), b.clone(), c.clone()];
        let r = stallings_rank(&t);
        prop_assert!(r <= 3);
        prop_assert_eq!(stallings_rank(&[a.mul(&b), b.clone(), c.clone()]), r);
        prop_assert_eq!(stallings_rank(&[a.inv(), b.clone(), c.clone()]), r);
        prop_assert_eq!(stallings_rank(&[c.clone(), a.clone(), b.clone()]), r);
        prop_assert!(core_graph(&t).is_folded());
    }

    #[test]
    fn delzant_is_sound(a in word(2, 10), b in word(2, 10)) {
        if delzant_condition(&[a.clone(), b.clone()], 1) {
            prop_assert!(is_free_basis(&[a, b]));
        }
    }
}

#[test]
fn failure_rate_decays_geometrically() {
    let sweep = genericity_sweep(2, &[1, 2, 3, 4], 20_000, 11).unwrap();
    let fails: Vec<f64> = sweep.iter().map(|r| 1.0 - r.basis_frac).collect();
    assert!(fails.windows(2).all(|w| w[1] <= w[0]), "{fails:?}");
    // Each step shrinks the failure rate by a bounded-away-from-one factor,
    // checked where the upper confidence bound stays informative.
    for w in sweep.windows(2) {
        let (lo, hi) = (1.0 - w[0].basis_ci.1, 1.0 - w[1].basis_ci.0);
        if lo > 0.01 {
            assert!(hi / lo < 0.9, "radius {} -> {}: {lo} vs {hi}", w[0].radius, w[1].radius);
        }
    }
}
