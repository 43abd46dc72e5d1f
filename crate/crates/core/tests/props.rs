use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selfsim::fincat::validate_category;
use selfsim::module::validate_module;
use selfsim::props::*;

proptest! {
    #[test]
    fn random_categories_are_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_category(&mut rng, "c");
        prop_assert!(validate_category(&c).is_empty(), "{:?}", validate_category(&c));
    }

    #[test]
    fn along_modules_are_modules(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = Arc::new(random_category(&mut rng, "c"));
        let (g, h) = (random_endofunctor(&mut rng, &c), random_endofunctor(&mut rng, &c));
        prop_assert!(g.is_functor(&c) && h.is_functor(&c));
        let m = along(c, &g, &h, "M");
        prop_assert!(validate_module(&m).is_empty());
    }

    #[test]
    fn partitions_compare_up_to_relabelling(v in prop::collection::vec(0usize..4, 0..12), shift in 1usize..5) {
        let relabelled: Vec<usize> = v.iter().map(|x| x * 7 + shift).collect();
        prop_assert!(same_partition(&v, &relabelled));
        if let Some(i) = (1..v.len()).find(|&i| v[i] != v[0]) {
            let mut merged = v.clone();
            merged[i] = v[0];
            prop_assert!(!same_partition(&v, &merged));
        }
    }
}

#[test]
fn identity_and_tensors_are_flat() {
    let r = flatness_theorems(3, 5, 6);
    assert!(r.holds(), "{:?}", r.failures);
    assert_eq!(r.categories, 5);
    assert!(r.tensors >= 5, "{r:?}");
}

#[test]
fn coend_matches_naive_closure() {
    let r = coend_agreement(4, 50, 20, 200);
    assert!(r.holds(), "{:?}", r.failures);
    assert_eq!(r.instances, 50);
    assert!(r.max_pairs <= 200);
    // some instances identify pairs, so the comparison is not vacuous
    assert!(r.total_classes < r.total_pairs);
}

#[test]
fn non_flat_candidates_occur() {
    // the flatness filter rejects something, so tensors are not trivially flat inputs
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut rejected = 0;
    for _ in 0..40 {
        let c = Arc::new(random_category(&mut rng, "c"));
        let (g, h) = (random_endofunctor(&mut rng, &c), random_endofunctor(&mut rng, &c));
        let m = along(c.clone(), &g, &h, "M");
        use selfsim::fincat::Category;
        if !c.objects().all(|a| selfsim::module::flat_check(&m, a).holds()) {
            rejected += 1;
        }
    }
    assert!(rejected > 0);
}
