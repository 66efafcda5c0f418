use proptest::prelude::*;
use tighthc::generate;
use tighthc::oracle::{dp_hamilton, permutation_hamilton, verify_hamilton_cycle, verify_tight_cycle};
use tighthc::seed::stage_rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn dp_agrees_with_permutations(n in 5usize..=8, p in 0.3f64..0.95, seed in any::<u64>()) {
        let g = generate::random(n, p, &mut stage_rng(seed, "oracle-props"));
        let dp = dp_hamilton(&g).unwrap();
        let brute = permutation_hamilton(&g, 8).unwrap();
        prop_assert_eq!(dp.is_some(), brute.is_some());
        if let Some(c) = dp {
            prop_assert!(verify_hamilton_cycle(&g, c.order()));
            prop_assert_eq!(c.order()[0], 0);
        }
    }

    #[test]
    fn verification_ignores_rotation_and_reflection(n in 5usize..=10, seed in any::<u64>(), shift in 0usize..10) {
        let g = generate::random(n, 0.9, &mut stage_rng(seed, "oracle-rot"));
        if let Some(c) = dp_hamilton(&g).unwrap() {
            let mut o = c.into_vec();
            o.rotate_left(shift % n);
            prop_assert!(verify_tight_cycle(&g, &o));
            o.reverse();
            prop_assert!(verify_tight_cycle(&g, &o));
        }
    }
}

#[test]
fn dp_finds_the_lexicographically_smallest_rooted_cycle() {
    let g = generate::complete(8);
    assert_eq!(dp_hamilton(&g).unwrap().unwrap().order(), &[0, 1, 2, 3, 4, 5, 6, 7]);
    // Relabelled tight cycle: order 0 2 4 6 1 3 5 7 8.
    let order = [0, 2, 4, 6, 1, 3, 5, 7, 8];
    let mut h = tighthc::ThreeGraph::new(9);
    for i in 0..9 {
        h.add_edge(order[i], order[(i + 1) % 9], order[(i + 2) % 9]).unwrap();
    }
    let c = dp_hamilton(&h).unwrap().unwrap();
    assert_eq!(c.order(), &[0, 2, 4, 6, 1, 3, 5, 7, 8]);
}

#[test]
fn split_graphs_are_not_hamiltonian() {
    for n in [10, 12] {
        assert_eq!(dp_hamilton(&generate::split(n)).unwrap(), None);
    }
}
