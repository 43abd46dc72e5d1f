use selfsim::fincat::Category;
use selfsim::module::Module;
use selfsim::builtin::System;
use selfsim::finalcoalg::*;
use selfsim::Budget;

#[test]
fn stream_classes_double_per_level() {
    let s = System::streams(2, 4);
    let one = s.object_by_size(1).unwrap();
    for n in 1..=5 {
        let hi = build_approx(&s, n, &[one], &Budget::unlimited()).unwrap();
        let lo = build_approx(&s, n - 1, &[one], &Budget::unlimited()).unwrap();
        let iota = structure_map(&s, &hi, &lo, one, &Budget::unlimited()).unwrap();
        assert_eq!(hi.num_classes(one), 1 << n);
        assert!(iota.bijective());
    }
}

fn reduced_matches_full(s: &System, n: usize) {
    let anchors: Vec<_> = s.base().objects().collect();
    let full = build_full(s, n, &anchors, &Budget::unlimited()).unwrap();
    let red = build_reduced(s, n, &anchors, &Budget::unlimited()).unwrap();
    for &b in &anchors {
        let f = full.at(b).unwrap();
        let mut map = std::collections::HashMap::new();
        let mut back = std::collections::HashMap::new();
        for ((c, g), &k) in f.pairs().iter().zip(f.partition()) {
            let r = red.class_of(s, c, *g).expect("reduced class");
            assert_eq!(*map.entry(k).or_insert(r), r, "{} n={n}", s.name());
            assert_eq!(*back.entry(r).or_insert(k), k, "{} n={n}", s.name());
        }
        assert_eq!(f.num_classes(), red.num_classes(b));
    }
}

#[test]
fn reduced_classes_agree_with_full_zigzags() {
    for (s, n) in [(System::streams(2, 2), 2), (System::streams(2, 3), 1), (System::trees(1, 2), 2), (System::freyd(3), 1)] {
        for k in 0..=n {
            reduced_matches_full(&s, k);
        }
    }
}

/// The depth-`n` behaviour of a point: the term obtained by unfolding the
/// complex from it, cut at depth `n`.
fn unfold(s: &System, c: &selfsim::complexes::TruncatedComplex, i: usize, x: u32) -> String {
    if i == c.depth() {
        return "*".into();
    }
    let m = s.elem_map(c.arrow(i + 1));
    let sh = s.endo.decode(s.carrier(c.obj(i + 1)).n, m[x as usize]);
    let kids: Vec<String> = sh.args[..sh.arity as usize].iter().map(|&y| unfold(s, c, i + 1, y)).collect();
    format!("{}({})", sh.tag, kids.join(","))
}

fn behaviour_partition_matches(s: &System, n: usize) {
    let anchors: Vec<_> = s.base().objects().collect();
    let full = build_full(s, n, &anchors, &Budget::unlimited()).unwrap();
    for &b in &anchors {
        let f = full.at(b).unwrap();
        let keys: Vec<Vec<String>> =
            f.pairs().iter().map(|(c, g)| s.kmap(*g).iter().map(|&x| unfold(s, c, 0, x)).collect()).collect();
        for i in 0..keys.len() {
            for j in 0..keys.len() {
                assert_eq!(keys[i] == keys[j], f.partition()[i] == f.partition()[j], "{} n={n}", s.name());
            }
        }
    }
}

#[test]
fn full_classes_are_behaviours() {
    behaviour_partition_matches(&System::streams(2, 2), 2);
    behaviour_partition_matches(&System::streams(3, 2), 1);
    behaviour_partition_matches(&System::trees(1, 2), 2);
    behaviour_partition_matches(&System::trees(2, 2), 1);
}

#[test]
fn tree_classes_at_depth_one() {
    // depth-1 shapes at the one-point anchor: a leaf per label, or a node
    for labels in 1..=2 {
        let s = System::trees(labels, 4);
        let one = s.object_by_size(1).unwrap();
        let i = build_approx(&s, 1, &[one], &Budget::unlimited()).unwrap();
        assert_eq!(i.num_classes(one), labels as usize + 1);
    }
}

/// Two states per object, emitting 0 then 1 alternately.
fn alternating(s: &System) -> selfsim::module::Coalgebra {
    use selfsim::module::{CoendPair, FinSetFunctor};
    let c = s.base();
    let values = c.objects().map(|_| vec!["p".to_string(), "q".to_string()]).collect();
    let mut x = FinSetFunctor::new("alt", s.cat_arc(), values);
    for row in &mut x.action {
        *row = vec![0, 1];
    }
    let emit = |b, t: u32| {
        let n = s.carrier(b).n;
        let map: Vec<u32> = (0..n as u32).map(|y| s.endo.encode(n, t, &[y])).collect();
        s.elem(b, b, &map).unwrap()
    };
    let structure = c
        .objects()
        .map(|b| vec![CoendPair { m: emit(b, 0), x: 1 }, CoendPair { m: emit(b, 1), x: 0 }])
        .collect();
    selfsim::module::Coalgebra { name: "alt".into(), carrier: x, structure }
}

#[test]
fn alternating_stream_solution_is_unique() {
    let s = System::streams(2, 3);
    let e = alternating(&s);
    assert!(e.validate(&s).is_empty(), "{:?}", e.validate(&s));
    let (one, two) = (s.object_by_size(1).unwrap(), s.object_by_size(2).unwrap());
    for n in 1..=3 {
        let sol = solve(&s, &e, n, Some(&[one, two]), &Budget::unlimited()).unwrap();
        assert!(sol.commutes(), "depth {n}: {:?}", sol.failures);
        assert_eq!(sol.unique(), Some(true), "depth {n}: {:?}", sol.candidates);
        // p and q have different behaviours at the one-point anchor
        let k = &sol.classes[one.idx()];
        assert_ne!(k[0], k[1]);
    }
}

/// `c → b ⇉ a` with `c` initial.
fn fork_with_initial() -> std::sync::Arc<selfsim::fincat::FinCategory> {
    let mut b = selfsim::fincat::CategoryBuilder::new("fork");
    let a = b.object("a").unwrap();
    let x = b.object("b").unwrap();
    let c = b.object("c").unwrap();
    let u = b.morphism("u", x, a).unwrap();
    let v = b.morphism("v", x, a).unwrap();
    let w = b.morphism("w", c, x).unwrap();
    let uw = b.morphism("uw", c, a).unwrap();
    b.compose(u, w, uw);
    b.compose(v, w, uw);
    std::sync::Arc::new(b.build())
}

#[test]
fn identity_module_with_initial_object_is_a_point() {
    let base = fork_with_initial();
    let m = selfsim::module::IdentityModule::new(base.clone());
    let c = base.object("c").unwrap();
    let chain = refinement_chain(&m, &[c], 3, &Budget::unlimited()).unwrap();
    assert_eq!(chain.counts(c), vec![1, 1, 1, 1]);
    assert!(chain.stabilized(c));
    assert!(chain.levels.iter().all(|l| l.warnings.is_empty()));
}

#[test]
fn identity_module_over_a_discrete_base_warns() {
    use selfsim::fincat::{is_cofiltered, Cofiltered, FinCategory};
    let base = std::sync::Arc::new(FinCategory::discrete("two", &["p", "q"]));
    let m = selfsim::module::IdentityModule::new(base.clone());
    let p = base.object("p").unwrap();
    let approx = build_approx(&m, 2, &[p], &Budget::unlimited()).unwrap();
    assert_eq!(approx.warnings.len(), 1);
    assert!(approx.warnings[0].contains("the category A must be cofiltered"));
    assert!(approx.warnings[0].contains("have no span"));
    assert!(matches!(is_cofiltered(&*base), Cofiltered::NoSpan(..)));
}

#[test]
fn streams_never_stabilize() {
    let s = System::streams(2, 4);
    let one = s.object_by_size(1).unwrap();
    let chain = refinement_chain(&s, &[one], 5, &Budget::unlimited()).unwrap();
    assert_eq!(chain.counts(one), vec![1, 2, 4, 8, 16, 32]);
    assert!(!chain.stabilized(one));
    // truncation forgets the last letter: every class has two preimages
    for r in &chain.maps {
        let mut hits = vec![0; r[&one].iter().max().unwrap() + 1];
        r[&one].iter().for_each(|&k| hits[k] += 1);
        assert!(hits.iter().all(|&h| h == 2));
    }
}

/// Every member of a class, not only its representative, lands in the same
/// class under the action and under truncation.
fn action_and_refinement_are_well_defined(m: &dyn Module, n: usize) {
    let anchors: Vec<_> = m.base().objects().collect();
    let hi = build_approx(m, n, &anchors, &Budget::unlimited()).unwrap();
    let lo = build_approx(m, n - 1, &anchors, &Budget::unlimited()).unwrap();
    let c = m.base();
    for &b in &anchors {
        let at = hi.at(b).unwrap();
        let r = refinement(m, &hi, &lo, b).unwrap();
        for k in 0..at.num_classes() {
            for (d, g) in at.members(k) {
                assert_eq!(lo.class_of(m, &d.truncate(n - 1).unwrap(), *g), Some(r[k]));
                for h in c.morphisms().filter(|&h| c.src(h) == b) {
                    assert_eq!(hi.class_of(m, d, c.compose(h, *g)), hi.act(m, h, k), "{}", m.name());
                }
            }
        }
    }
}

#[test]
fn class_operations_do_not_depend_on_representatives() {
    action_and_refinement_are_well_defined(&System::streams(2, 3), 2);
    action_and_refinement_are_well_defined(&System::trees(1, 3), 1);
    action_and_refinement_are_well_defined(&System::freyd(4), 2);
    let t = selfsim::module::TableModule::materialize(&System::streams(1, 2), System::streams(1, 2).cat_arc());
    action_and_refinement_are_well_defined(&t, 2);
    action_and_refinement_are_well_defined(&selfsim::module::IdentityModule::new(fork_with_initial()), 2);
}
