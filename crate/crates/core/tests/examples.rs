use proptest::prelude::*;
use selfsim::builtin::{Carrier, Kind, System};
use selfsim::complexes::enumerate_complexes;
use selfsim::examples::freyd::{self, beh, digit_complex, dyadic_equal};
use selfsim::examples::lin::{self, lin_factorize, LinFactorization};
use selfsim::examples::zip::{self, interleave, EventuallyConstant};
use selfsim::solvability::{check_strong, check_strong_with, factorization_final_subset, Options};
use selfsim::Budget;

fn middle(sys: &System) -> u32 {
    let three = sys.object_by_size(3).unwrap();
    let c = sys.carrier(three);
    (0..3u32).find(|&v| v != 0 && v as usize != c.top()).unwrap()
}

#[test]
fn digit_complexes_read_back() {
    let s = System::freyd(4);
    let mid = middle(&s);
    let zeros = beh(&s, &digit_complex(&s, &[0, 0, 0]).unwrap(), mid);
    assert_eq!(zeros.digits, vec![0, 0, 0]);
    assert!(zeros.ambiguous.is_empty() && zeros.constant.is_none());
    let ones = beh(&s, &digit_complex(&s, &[1, 1, 1]).unwrap(), mid);
    assert_eq!(ones.digits, vec![1, 1, 1]);
    let c = digit_complex(&s, &[0, 1]).unwrap();
    let bottom = beh(&s, &c, 0);
    assert_eq!(bottom.constant, Some(0));
    assert_eq!(bottom.digits, vec![0, 0]);
    let top = beh(&s, &c, 2);
    assert_eq!(top.constant, Some(1));
    assert_eq!(top.digits, vec![1, 1]);
}

#[test]
fn behaviour_is_surjective() {
    let s = System::freyd(4);
    for (n, total) in [(1, 2), (3, 8), (5, 32)] {
        let r = freyd::beh_surjective(&s, n).unwrap();
        assert!(r.holds(), "{:?}", r.misses);
        assert_eq!(r.total, total);
    }
    assert!(freyd::beh_surjective(&s, 0).is_err());
}

fn value(d: &[u8]) -> i64 {
    d.iter().fold(0, |acc, &x| 2 * acc + i64::from(x))
}

proptest! {
    /// Prefixes name the same number exactly when their dyadic intervals
    /// coincide or touch.
    #[test]
    fn dyadic_equality_is_interval_adjacency(a in prop::collection::vec(0u8..2, 0..8), b in prop::collection::vec(0u8..2, 0..8)) {
        let b: Vec<u8> = b.into_iter().chain(std::iter::repeat(0)).take(a.len()).collect();
        prop_assert_eq!(dyadic_equal(&a, &b), (value(&a) - value(&b)).abs() <= 1);
    }
}

#[test]
fn behaviour_is_well_defined_at_bound_four() {
    let s = System::freyd(4);
    let r = freyd::beh_well_defined(&s, 2, &Budget::unlimited()).unwrap();
    assert!(r.holds(), "{:?}", &r.failures[..r.failures.len().min(3)]);
    assert_eq!(r.points, 71639);
    // the last level is unconstrained, so truncated classes at the 3-chain collapse
    assert_eq!(r.groups, 1);
    assert_eq!(r.squares_checked, 71676);
}

#[test]
fn behaviour_separates_at_bound_four() {
    let s = System::freyd(4);
    let r = freyd::beh_separating(&s, 2, &Budget::unlimited()).unwrap();
    assert!(r.holds(), "{:?}", &r.failures[..r.failures.len().min(3)]);
    assert_eq!(r.points, 71639);
    assert!(r.groups > 1);
}

#[test]
fn five_chain_map_matches_the_case_table() {
    let s = System::freyd(4);
    let f = freyd::five_f(&s);
    let e = &s.endo;
    assert_eq!(e.decode(5, f[1]).tag, selfsim::builtin::endo::LEFT);
    assert_eq!(e.decode(5, f[1]).args[0], 2);
    assert_eq!(e.decode(5, f[2]).tag, selfsim::builtin::endo::GLUE);
    assert_eq!(e.decode(5, f[3]).tag, selfsim::builtin::endo::RIGHT);
    assert_eq!(e.decode(5, f[3]).args[0], 2);
    assert_eq!((f[0], f[4] as usize), (0, 2 * 5 - 2));
    assert!(Kind::Pos01.is_hom(&f, &Carrier::chain(5), &e.carrier(&Carrier::chain(5))));
    for digits in [vec![0, 1], vec![1, 1, 0], vec![0, 0, 0, 1]] {
        let c = digit_complex(&s, &digits).unwrap();
        assert_eq!(freyd::five_squares(&s, &c), Ok(digits.len()));
    }
}

#[test]
fn serial_squares_over_direct_clashes() {
    let s = System::freyd(4);
    let r3 = freyd::no_serial_squares(&s, 3, &Budget::unlimited()).unwrap();
    assert!(r3.holds());
    assert_eq!((r3.blocked_pairs, r3.direct_clash, r3.indirect_squares), (4, 4, 0));
    let r4 = freyd::no_serial_squares(&s, 4, &Budget::unlimited()).unwrap();
    assert!(r4.holds(), "{:?}", r4.counterexamples.first());
    assert_eq!((r4.blocked_pairs, r4.direct_clash), (286, 216));
    // pairs blocked only through a chain of identifications do admit squares
    assert_eq!(r4.indirect_squares, 5168);
    // successors of blocked pairs are blocked, and every chain of squares ends
    assert_eq!(r4.unblocked_successors, 0);
    assert!(r4.infinite.is_empty());
}

#[test]
fn strong_condition_at_depth_zero_needs_infinite_pairs() {
    let s = System::freyd(4);
    let b = Budget::unlimited();
    let opts = Options::default();
    // a blocked pair extends one level, so the one-step truncation has no fork
    let raw = check_strong(&s, 0, &opts, &b).unwrap();
    assert!(raw.exhaustive);
    assert!(!raw.holds());
    let serial = freyd::no_serial_squares(&s, 4, &b).unwrap();
    let v = check_strong_with(&s, 0, &opts, &b, &|u, w| serial.extends(&s, u, w)).unwrap();
    assert!(v.exhaustive);
    assert!(v.holds(), "{:?}", v.describe_failure(&s));
    assert!(v.parallel_checked > 0);
}

#[test]
fn lin_factorization_laws() {
    let r = lin::check_lin_laws(4, 3);
    assert!(r.holds(), "{:?}", &r.failures[..r.failures.len().min(3)]);
    assert!(r.factorizations > 0 && r.compositions > 0 && r.diagonals > 0 && r.preserved > 0);
}

#[test]
fn lin_factorize_examples() {
    let v = Carrier::chain(3);
    let id = vec![0, 1, 2];
    let f = lin_factorize(&v, &[id.clone(), id.clone()]);
    assert_eq!(f.epi_legs, vec![id.clone(), id.clone()]);
    assert_eq!(f.mono, id);
    let v = Carrier::chain(5);
    let f = lin_factorize(&v, &[vec![0, 2], vec![2, 4]]);
    assert_eq!(f.image.n, 3);
    assert_eq!(f.mono, vec![0, 2, 4]);
    assert_eq!(f.epi_legs, vec![vec![0, 1], vec![1, 2]]);
}

proptest! {
    #[test]
    fn factor_then_compose(n in 0usize..6, a in 0usize..4, b in 0usize..4, i in 0usize..1000, j in 0usize..1000) {
        let v = Carrier::chain(n);
        let fa = Kind::Lin.homs(&Carrier::chain(a), &v);
        let fb = Kind::Lin.homs(&Carrier::chain(b), &v);
        prop_assume!(!fa.is_empty() && !fb.is_empty());
        let legs = vec![fa[i % fa.len()].clone(), fb[j % fb.len()].clone()];
        let f = lin_factorize(&v, &legs);
        prop_assert!(lin::is_jointly_epi(&f.image, &f.epi_legs));
        for (e, l) in f.epi_legs.iter().zip(&legs) {
            let back: Vec<u32> = e.iter().map(|&x| f.mono[x as usize]).collect();
            prop_assert_eq!(&back, l);
        }
    }
}

#[test]
fn jointly_epi_means_covering() {
    let v = Carrier::chain(3);
    assert!(lin::is_jointly_epi(&v, &[vec![0, 1], vec![2]]));
    assert!(!lin::is_jointly_epi(&v, &[vec![0], vec![2]]));
    use selfsim::solvability::FactorizationOracle;
    let cocones = LinFactorization.jointly_epi_cocones(&[&Carrier::chain(1), &Carrier::chain(1)]);
    // a single point twice: one shared point, or two points in either order
    assert_eq!(cocones.iter().map(|(v, _)| v.n).collect::<Vec<_>>(), vec![1, 2, 2]);
}

#[test]
fn lin_factorization_family_is_final() {
    let s = System::lin(false, 2, 2);
    let b = Budget::unlimited();
    let cs = enumerate_complexes(&s, 1, None, &b).unwrap();
    let pick: Vec<_> = cs.iter().filter(|c| s.carrier(c.head()).n > 0).take(2).cloned().collect();
    assert_eq!(pick.len(), 2);
    let family = factorization_final_subset(&s, &lin::kchains(&s, &pick), Some(&LinFactorization)).unwrap();
    assert!(!family.is_empty());
    let r = lin::check_final_family(&s, &pick, &family, &b).unwrap();
    assert!(r.holds(), "{:?}", r.unfactored);
    assert!(r.cones > 0);
}

#[test]
fn zip_of_constant_streams_alternates() {
    let s = System::streams(2, 4);
    let b = Budget::unlimited();
    let (a, bb) = (EventuallyConstant::new(vec![], 0), EventuallyConstant::new(vec![], 1));
    let r = zip::zip_demo(&s, &[(a.clone(), bb.clone())], 4, &b).unwrap();
    assert!(r.holds());
    assert_eq!(r.cases[0].got, vec![0, 1, 0, 1]);
    let t = EventuallyConstant::new(vec![1], 0);
    let r = zip::zip_demo(&s, &[(t.clone(), t.clone())], 2, &b).unwrap();
    assert!(r.holds());
    assert_eq!(r.cases[0].got, vec![1, 1]);
}

#[test]
fn zip_of_random_streams_matches_interleaving() {
    let s = System::streams(2, 4);
    let pairs = zip::random_pairs(2, 20, 7);
    let r = zip::zip_demo(&s, &pairs, 6, &Budget::unlimited()).unwrap();
    assert!(r.holds(), "{:?}", r.cases.iter().find(|c| c.expected != c.got));
    for c in &r.cases {
        assert_eq!(c.got, interleave(&c.left, &c.right, 6));
    }
}
