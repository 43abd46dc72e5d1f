use selfsim::builtin::{Carrier, Endo, Kind, System};
use selfsim::fincat::{validate_category, Category};
use selfsim::module::{flat_check, validate_module, Module};

fn systems_small() -> Vec<System> {
    vec![
        System::streams(2, 2),
        System::trees(1, 2),
        System::freyd(4),
        System::lin(false, 3, 2),
        System::lin(true, 3, 2),
    ]
}

#[test]
fn small_builtins_validate() {
    for s in systems_small() {
        assert!(validate_category(s.base()).is_empty(), "{}", s.key());
        let v = validate_module(&s);
        assert!(v.is_empty(), "{}: {:?}", s.key(), v.first());
    }
}

#[test]
fn builtins_flat_at_every_object() {
    for s in [System::streams(2, 4), System::trees(1, 3), System::freyd(4), System::lin(false, 4, 3), System::lin(true, 4, 3)] {
        for a in s.base().objects() {
            let v = flat_check(&s, a);
            assert!(v.holds(), "{} at {}: {}", s.key(), s.base().obj_name(a), v.describe(&s));
        }
    }
}

#[test]
fn base_sizes() {
    // hom counts a^b summed over ordinals 0..=4
    let s = System::streams(2, 4);
    let total: usize = (0..=4u32).flat_map(|a| (0..=4u32).map(move |b| (a as usize).pow(b))).sum();
    assert_eq!(s.base().num_morphisms(), total);
    // bounded posets up to iso: sizes 2,3,4 give 1,1,2
    assert_eq!(System::freyd(4).base().num_objects(), 4);
    assert_eq!(System::freyd(5).base().num_objects(), 9);
}

#[test]
fn smash_of_chains_has_expected_size() {
    for s in System::freyd(5).carriers() {
        let v = Endo::Smash.carrier(s);
        assert_eq!(v.n, 2 * s.n - 1);
        // bottom and top of the two copies survive, glue is in the middle
        assert!(v.le(0, s.n - 1) && v.le(s.n - 1, v.n - 1));
        if s.is_chain() {
            assert!(v.is_chain());
        }
    }
    assert!(Kind::Pos01.is_hom(&[0, 2], &Carrier::chain(2), &Carrier::chain(3)));
}
