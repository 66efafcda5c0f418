use proptest::prelude::*;
use tighthc::absorb::{count_absorbers, enumerate_absorbers, find_absorber, is_absorber, AbsorberConstraint};
use tighthc::generate;
use tighthc::seed::stage_rng;
use tighthc::{ThreeGraph, VertexSet};

fn brute(g: &ThreeGraph, v: usize) -> u64 {
    let n = g.n();
    let mut c = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    c += is_absorber(g, v, [x, y, z, w]) as u64;
                }
            }
        }
    }
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn count_matches_brute_force(n in 5usize..=10, p in 0.2f64..1.0, seed in any::<u64>(), v in 0usize..10) {
        let g = generate::random(n, p, &mut stage_rng(seed, "absorb-count"));
        let v = v % n;
        let b = brute(&g, v);
        prop_assert_eq!(count_absorbers(&g, v), b);
        prop_assert_eq!(enumerate_absorbers(&g, v).count() as u64, b);
    }

    #[test]
    fn absorbers_close_under_reversal(n in 5usize..=12, p in 0.3f64..1.0, seed in any::<u64>()) {
        let g = generate::random(n, p, &mut stage_rng(seed, "absorb-rev"));
        for a in enumerate_absorbers(&g, 0) {
            prop_assert!(a.reversed().check(&g));
            prop_assert!(tighthc::oracle::verify_tight_path(&g, &a.with_vertex()));
            prop_assert!(tighthc::oracle::verify_tight_path(&g, &a.without_vertex()));
        }
    }

    #[test]
    fn found_absorbers_respect_constraints(n in 12usize..=30, seed in any::<u64>(), mask in any::<u32>()) {
        let g = generate::random(n, 0.7, &mut stage_rng(seed, "absorb-find"));
        let forbidden = VertexSet::from_vertices(n, (1..n).filter(|v| mask >> v & 1 == 1).take(n / 3));
        let c = AbsorberConstraint { forbidden: &forbidden, shadow_graph: &g, pair_threshold: 2.0, within: None };
        match find_absorber(&g, 0, &c, &mut stage_rng(seed, "absorb-find-rng")) {
            Ok(a) => {
                prop_assert!(a.check(&g));
                prop_assert!(c.admits(&a));
            }
            Err(_) => {
                prop_assert!(enumerate_absorbers(&g, 0).all(|a| !c.admits(&a)));
            }
        }
    }
}
