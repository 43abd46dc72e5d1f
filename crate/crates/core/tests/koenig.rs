use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use selfsim::fincat::{FinPreorder, MonotoneMap};
use selfsim::props::{passing_chain, random_chain};
use selfsim::solvability::*;
use selfsim::Error;

fn chain2() -> FinPreorder {
    FinPreorder::from_relation(vec!["bot".into(), "top".into()], &[(0, 1)])
}

#[test]
fn principal_upsets_agree_with_powerset_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut passing = 0;
    for _ in 0..100 {
        let ch = random_chain(&mut rng, 1, 12);
        ch.validate().unwrap();
        let fast = check_koenig_conditions(&ch).holds();
        assert_eq!(fast, koenig_powerset_oracle(&ch));
        passing += usize::from(fast);
    }
    // both outcomes occur, so the comparison is not vacuous
    assert!(passing > 0 && passing < 100, "passing = {passing}");
}

#[test]
fn top_to_bottom_map_fails_condition_two() {
    let ch = PreorderChain { levels: vec![chain2(), chain2()], maps: vec![MonotoneMap { map: vec![0, 0] }] };
    let v = check_koenig_conditions(&ch);
    assert_eq!(v.failure, Some(KoenigFailure::NotUpClosed { n: 0, x: 0, violating: 1 }));
    assert!(!koenig_powerset_oracle(&ch));
}

#[test]
fn one_point_chain_threads_constantly() {
    let one = FinPreorder::anonymous(1, |_, _| true);
    let ch = PreorderChain { levels: vec![one; 6], maps: vec![MonotoneMap { map: vec![0] }; 5] };
    assert!(check_koenig_conditions(&ch).holds());
    assert_eq!(thread(&ch, 5).unwrap(), vec![0; 6]);
}

#[test]
fn threads_through_deep_random_chains() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut threaded = 0;
    let mut empty_seen = 0;
    let mut passing = 0;
    for trial in 0..40 {
        let mut ch = if trial % 2 == 1 { passing_chain(&mut rng, 50) } else { random_chain(&mut rng, 50, 5) };
        let hole = (trial % 4 == 0).then(|| rng.gen_range(0..=50));
        if let Some(k) = hole {
            // no map can land in an empty level, so everything above it is empty too
            for j in k..=50 {
                ch.levels[j] = FinPreorder::anonymous(0, |_, _| false);
                if j > 0 {
                    ch.maps[j - 1].map.clear();
                }
            }
        }
        ch.validate().unwrap();
        let verdict = check_koenig_conditions(&ch);
        match thread(&ch, 50) {
            Ok(t) => {
                assert!(hole.is_none());
                for n in 0..50 {
                    assert_eq!(ch.maps[n].map[t[n + 1]], t[n]);
                }
                threaded += 1;
            }
            Err(Error::EmptyLevel(k)) => {
                assert_eq!(Some(k), hole);
                assert!(!verdict.holds());
                empty_seen += 1;
            }
            Err(e) => panic!("unexpected error {e}"),
        }
        if verdict.holds() {
            assert!(thread(&ch, 50).is_ok());
            passing += 1;
        }
    }
    assert!(passing >= 20, "passing = {passing}");
    assert_eq!(empty_seen, 10);
    assert_eq!(threaded, 30);
}

#[test]
fn thread_past_depth_is_rejected() {
    let one = FinPreorder::anonymous(1, |_, _| true);
    let ch = PreorderChain { levels: vec![one.clone(), one], maps: vec![MonotoneMap { map: vec![0] }] };
    assert!(matches!(thread(&ch, 3), Err(Error::DepthExceeded { .. })));
}
