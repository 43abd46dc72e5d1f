use std::sync::Arc;

use proptest::prelude::*;
use selfsim::builtin::System;
use selfsim::complexes::*;
use selfsim::fincat::{validate_category, Category, Obj};
use selfsim::module::{elems, IdentityModule, Module, TableModule};
use selfsim::Budget;

fn brute_morphisms(m: &dyn Module, s: &TruncatedComplex, t: &TruncatedComplex) -> Vec<ComplexMorphism> {
    // every component sequence, filtered by the squares
    let c = m.base();
    let mut seqs: Vec<Vec<_>> = vec![vec![]];
    for i in 0..s.objs.len() {
        let mut next = Vec::new();
        for p in &seqs {
            for &f in c.hom(s.obj(i), t.obj(i)) {
                let mut q = p.clone();
                q.push(f);
                next.push(q);
            }
        }
        seqs = next;
    }
    let mut out: Vec<ComplexMorphism> = seqs
        .into_iter()
        .map(|comps| ComplexMorphism { comps })
        .filter(|f| {
            (1..=s.depth()).all(|i| m.lact(t.arrow(i), f.comps[i]) == m.ract(f.comps[i - 1], s.arrow(i)))
        })
        .collect();
    out.sort();
    out
}

#[test]
fn depth_zero_is_the_base() {
    let s = System::streams(2, 3);
    let cs = enumerate_complexes(&s, 0, None, &Budget::unlimited()).unwrap();
    assert_eq!(cs.len(), s.base().num_objects());
}

#[test]
fn stream_depth_one_count() {
    // maps 1 → 2 × a1, one per a1 ≤ 4
    let s = System::streams(2, 4);
    let one = s.object_by_size(1).unwrap();
    let cs = enumerate_complexes(&s, 1, Some(one), &Budget::unlimited()).unwrap();
    let oracle: usize = (0..=4).map(|a1| 2 * a1).sum();
    assert_eq!(cs.len(), oracle);
    assert_eq!(count_complexes(&s, 1, Some(one)), oracle as u128);
}

#[test]
fn empty_module_only_depth_zero() {
    let base = Arc::new(selfsim::fincat::FinCategory::terminal());
    let m = TableModule::new("empty", base);
    assert_eq!(enumerate_complexes(&m, 0, None, &Budget::unlimited()).unwrap().len(), 1);
    assert!(enumerate_complexes(&m, 2, None, &Budget::unlimited()).unwrap().is_empty());
}

#[test]
fn every_element_is_a_first_arrow() {
    let s = System::trees(1, 2);
    let cs = enumerate_complexes(&s, 1, None, &Budget::unlimited()).unwrap();
    for a in s.base().objects() {
        for b in s.base().objects() {
            for e in elems(&s, a, b) {
                assert!(cs.iter().any(|c| c.arrow(1) == e));
            }
        }
    }
}

#[test]
fn carrier_solver_matches_brute_force() {
    for s in [System::streams(2, 2), System::trees(1, 2), System::freyd(4), System::lin(true, 3, 2)] {
        let table = TableModule::materialize(&s, s.cat_arc());
        let cs = enumerate_complexes(&s, 1, None, &Budget::unlimited()).unwrap();
        let step = (cs.len() / 40).max(1);
        let sample: Vec<&TruncatedComplex> = cs.iter().step_by(step).collect();
        for x in &sample {
            for y in &sample {
                let mut fast = enumerate_morphisms(&s, x, y);
                fast.sort();
                assert_eq!(fast, brute_morphisms(&table, x, y), "{}", s.key());
            }
        }
    }
}

#[test]
fn freyd_zigzag_complexes_are_connected() {
    // middle of the 3-chain sent to the left middle versus the glue point of 2-chain copies
    let s = System::freyd(4);
    let c3 = s.object_by_size(3).unwrap();
    let c2 = s.object_by_size(2).unwrap();
    let left_mid = s.elem(c3, c3, &[0, 1, 4]).unwrap();
    let glue = s.elem(c2, c3, &[0, 1, 2]).unwrap();
    let x = TruncatedComplex::new(vec![c3, c3], vec![left_mid]).unwrap();
    let y = TruncatedComplex::new(vec![c3, c2], vec![glue]).unwrap();
    let both = enumerate_morphisms(&s, &x, &y).len() + enumerate_morphisms(&s, &y, &x).len();
    assert!(both > 0);
}

#[test]
fn truncation_and_identity() {
    let s = System::streams(2, 2);
    let lazy = pseudo_random(Arc::new(System::streams(2, 2)), Obj(1), 7);
    let c3 = lazy.at(3);
    assert_eq!(c3.truncate(3).unwrap(), c3);
    assert_eq!(c3.truncate(0).unwrap(), TruncatedComplex::single(Obj(1)));
    assert_eq!(lazy.at(2).truncate(1).unwrap(), lazy.at(1));
    assert!(matches!(c3.truncate(4), Err(selfsim::Error::DepthExceeded { .. })));
    let id = ComplexMorphism::identity(s.base(), &c3);
    assert!(is_complex_morphism(&s, &c3, &c3, &id));
    assert!(enumerate_morphisms(&s, &c3, &c3).contains(&id));
}

#[test]
fn small_complex_categories_are_categories() {
    let s = System::streams(1, 2);
    let cs = enumerate_complexes(&s, 1, None, &Budget::unlimited()).unwrap();
    let cat = complex_category(&s, &cs, &Budget::unlimited()).unwrap();
    assert!(validate_category(&cat).is_empty());
    let base = Arc::new(selfsim::fincat::FinCategory::discrete("D", &["x", "y"]));
    let id = IdentityModule::new(base);
    let cs = enumerate_complexes(&id, 2, None, &Budget::unlimited()).unwrap();
    assert_eq!(cs.len(), 2);
    assert!(validate_category(&complex_category(&id, &cs, &Budget::unlimited()).unwrap()).is_empty());
}

#[test]
fn bound_is_enforced() {
    let s = System::streams(2, 4);
    let r = enumerate_complexes(&s, 4, None, &Budget::new(1000));
    assert!(matches!(r, Err(selfsim::Error::BoundExceeded(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn lazy_truncation_is_coherent(seed in any::<u64>(), k in 0usize..5) {
        let s: Arc<dyn Module> = Arc::new(System::trees(1, 2));
        let lazy = pseudo_random(s.clone(), Obj(2), seed);
        let deep = lazy.at(k + 2);
        prop_assert_eq!(deep.truncate(k).unwrap(), lazy.at(k));
        prop_assert!(deep.is_valid(s.as_ref()));
    }

    #[test]
    fn composite_of_morphisms_is_a_morphism(i in 0usize..40, j in 0usize..40, k in 0usize..40) {
        let s = System::streams(2, 2);
        let cs = enumerate_complexes(&s, 2, None, &Budget::unlimited()).unwrap();
        let (x, y, z) = (&cs[i % cs.len()], &cs[j % cs.len()], &cs[k % cs.len()]);
        for f in enumerate_morphisms(&s, x, y) {
            for g in enumerate_morphisms(&s, y, z) {
                let gf = ComplexMorphism::compose(s.base(), &g, &f);
                prop_assert!(is_complex_morphism(&s, x, z, &gf));
            }
        }
    }
}
