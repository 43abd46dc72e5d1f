use std::sync::Arc;

use selfsim::builtin::System;
use selfsim::complexes::*;
use selfsim::fincat::Category;
use selfsim::module::Module;
use selfsim::solvability::*;
use selfsim::props::{frozen, propagation_trials};
use selfsim::Budget;

/// Every component sequence filtered by the squares, independent of the solver.
fn brute_morphisms(m: &dyn Module, s: &TruncatedComplex, t: &TruncatedComplex) -> Vec<ComplexMorphism> {
    let c = m.base();
    let mut seqs: Vec<Vec<_>> = vec![vec![]];
    for i in 0..s.objs.len() {
        seqs = seqs
            .into_iter()
            .flat_map(|p| {
                c.hom(s.obj(i), t.obj(i)).iter().map(move |&f| {
                    let mut q = p.clone();
                    q.push(f);
                    q
                })
            })
            .collect();
    }
    seqs.into_iter()
        .map(|comps| ComplexMorphism { comps })
        .filter(|f| is_complex_morphism(m, s, t, f))
        .collect()
}

#[test]
fn pair_cone_points_match_brute_count() {
    let owned = Arc::new(System::streams(2, 2));
    let s = &*owned;
    let arc: Arc<dyn Module> = owned.clone();
    let cs = enumerate_complexes(s, 1, None, &Budget::unlimited()).unwrap();
    let (x, y) = (&cs[cs.len() / 2], &cs[cs.len() - 1]);
    let d = Diagram::discrete(vec![frozen(arc.clone(), x), frozen(arc, y)]);
    let p = build_cone_preorder(s, &d, 1, &Budget::unlimited()).unwrap();
    let brute: usize = cs.iter().map(|v| brute_morphisms(s, v, x).len() * brute_morphisms(s, v, y).len()).sum();
    assert_eq!(p.len(), brute);
    assert!(!p.is_empty());
}

#[test]
fn single_complex_preorder_contains_identity_cone() {
    let owned = Arc::new(System::streams(2, 2));
    let s = &*owned;
    let arc: Arc<dyn Module> = owned.clone();
    let x = enumerate_complexes(s, 2, None, &Budget::unlimited()).unwrap().pop().unwrap();
    let d = Diagram::discrete(vec![frozen(arc, &x)]);
    let p = build_cone_preorder(s, &d, 2, &Budget::unlimited()).unwrap();
    let id = ConePoint { vertex: x.clone(), legs: vec![ComplexMorphism::identity(s.base(), &x)] };
    let k = p.position(&id).expect("identity cone");
    // the identity cone is final: everything factors through it
    for q in 0..p.len() {
        assert!(p.le(s, q, k));
    }
}

#[test]
fn cone_order_agrees_with_brute_factorization() {
    let owned = Arc::new(System::streams(1, 2));
    let s = &*owned;
    let arc: Arc<dyn Module> = owned.clone();
    let cs = enumerate_complexes(s, 1, None, &Budget::unlimited()).unwrap();
    // the largest preorder over a pair of nodes that stays within 50 points
    let p = cs
        .iter()
        .flat_map(|x| cs.iter().map(move |y| (x, y)))
        .map(|(x, y)| {
            let d = Diagram::discrete(vec![frozen(arc.clone(), x), frozen(arc.clone(), y)]);
            build_cone_preorder(s, &d, 1, &Budget::unlimited()).unwrap()
        })
        .filter(|p| p.len() <= 50)
        .max_by_key(|p| p.len())
        .unwrap();
    assert!(p.len() > 10, "{} points", p.len());
    let pre = p.materialize(s, 50).unwrap();
    let c = s.base();
    for a in 0..p.len() {
        for b in 0..p.len() {
            let (pa, pb) = (&p.points[a], &p.points[b]);
            let oracle = brute_morphisms(s, &pa.vertex, &pb.vertex)
                .iter()
                .any(|h| pb.legs.iter().zip(&pa.legs).all(|(lb, la)| ComplexMorphism::compose(c, lb, h) == *la));
            assert_eq!(pre.le(a, b), oracle, "{a} <= {b}");
        }
    }
}

#[test]
fn stream_cone_chain_passes_koenig_conditions() {
    let owned = Arc::new(System::streams(1, 2));
    let s = &*owned;
    let arc: Arc<dyn Module> = owned.clone();
    let head = s.base().objects().last().unwrap();
    let d = Diagram::discrete(vec![pseudo_random(arc.clone(), head, 11), pseudo_random(arc, head, 12)]);
    let (levels, chain) = cone_chain(s, &d, 4, 200, &Budget::unlimited()).unwrap();
    chain.validate().unwrap();
    for (n, f) in chain.maps.iter().enumerate() {
        assert_eq!(f.is_monotone(&chain.levels[n + 1], &chain.levels[n]), None);
    }
    assert!(check_koenig_conditions(&chain).holds());
    assert!(koenig_powerset_oracle_if_small(&chain));
    let t = thread(&chain, 4).unwrap();
    for n in 0..4 {
        assert_eq!(levels[n + 1].points[t[n + 1]].truncate(n), levels[n].points[t[n]]);
    }
}

fn koenig_powerset_oracle_if_small(ch: &PreorderChain) -> bool {
    ch.levels.iter().any(|p| p.len() > 20) || koenig_powerset_oracle(ch)
}

#[test]
fn compact_on_streams() {
    let owned = Arc::new(System::streams(1, 2));
    let s = &*owned;
    let arc: Arc<dyn Module> = owned.clone();
    let head = s.base().objects().last().unwrap();
    let d = Diagram::discrete(vec![pseudo_random(arc, head, 5)]);
    let v = check_compact(s, &d, 3, 200, &Budget::unlimited()).unwrap();
    assert!(v.holds());
    assert_eq!(v.levels.len(), 4);
}

#[test]
fn weak_to_strong_on_streams() {
    let r = propagation_trials(&Arc::new(System::streams(2, 2)), 0, 10);
    assert!(r.holds(), "{:?}", r.failures);
    assert_eq!(r.accepted, 10);
}

#[test]
fn weak_to_strong_on_trees() {
    let r = propagation_trials(&Arc::new(System::trees(1, 2)), 100, 10);
    assert!(r.holds(), "{:?}", r.failures);
    assert_eq!(r.accepted, 10);
    assert!(r.pairs > 0 && r.parallel > 0);
}

#[test]
fn weak_to_strong_on_freyd_pair() {
    let owned = Arc::new(System::freyd(3));
    let s = &*owned;
    let arc: Arc<dyn Module> = owned.clone();
    let cs = enumerate_complexes(s, 2, None, &Budget::unlimited()).unwrap();
    let d = Diagram::discrete(vec![frozen(arc.clone(), &cs[0]), frozen(arc, &cs[cs.len() - 1])]);
    let got = weak_to_strong(s, &d, 2, &Budget::unlimited()).unwrap();
    for (l, x) in got.cone.legs.iter().zip(&d.at(2).0) {
        for i in 1..=2 {
            assert!(square_commutes(s, &got.cone.vertex, x, l, i));
        }
    }
}
