use proptest::prelude::*;
use rand::seq::SliceRandom;
use tighthc::generate;
use tighthc::seed::stage_rng;
use tighthc::shave::{count_threshold, purge, purge_in_order};
use tighthc::ThreeGraph;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn purge_ignores_sweep_order(n in 6usize..=15, p in 0.1f64..0.9, tau in 1.0f64..6.0, seed in any::<u64>()) {
        let mut rng = stage_rng(seed, "shave-order");
        let g = generate::random(n, p, &mut rng);
        let reference = purge(&g, tau);
        prop_assert!(reference.dichotomy_holds());
        let mut order: Vec<_> = g.unordered_pairs().collect();
        for _ in 0..100 {
            order.shuffle(&mut rng);
            let r = purge_in_order(&g, tau, &order);
            prop_assert_eq!(&r.subgraph, &reference.subgraph);
        }
    }

    #[test]
    fn purge_is_monotone(n in 6usize..=15, p in 0.1f64..0.9, t1 in 1.0f64..6.0, dt in 0.0f64..3.0, seed in any::<u64>()) {
        let g = generate::random(n, p, &mut stage_rng(seed, "shave-mono"));
        let lo = purge(&g, t1);
        let hi = purge(&g, t1 + dt);
        prop_assert!(hi.subgraph.is_subgraph_of(&lo.subgraph));
        prop_assert!(lo.subgraph.is_subgraph_of(&g));
        // The result is a fixed point.
        prop_assert_eq!(purge(&lo.subgraph, t1).removed_edges, 0);
    }

    #[test]
    fn purge_keeps_every_dichotomous_subgraph(n in 6usize..=12, p in 0.2f64..0.9, seed in any::<u64>()) {
        // Largest such subgraph: anything satisfying the dichotomy survives.
        let g = generate::random(n, p, &mut stage_rng(seed, "shave-max"));
        let tau = 2.0;
        let r = purge(&g, tau);
        let half = n / 2;
        let inner = ThreeGraph::from_edges(n, g.edges().map(|t| t.vertices()).filter(|v| v.iter().all(|&x| x < half)).map(|[a, b, c]| (a, b, c))).unwrap();
        let m = count_threshold(tau);
        let dich = inner.unordered_pairs().all(|(x, y)| { let c = inner.pair_codegree(x, y); c == 0 || c >= m });
        if dich {
            prop_assert!(inner.is_subgraph_of(&r.subgraph));
        }
    }
}
