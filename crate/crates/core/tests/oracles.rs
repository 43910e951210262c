//! Optimal distances checked against breadth-first search over every legal intermediate.

mod common;

use ms2path::{
    ms2_branch_and_bound, ms2_exact, pk_ms2_distance, pk_ms2_trajectory, verify_trajectory, Ms2Options,
    DEFAULT_THETA,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn nested_optimum_matches_search(n in 8usize..=15, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_structure(&mut rng, n, 4, DEFAULT_THETA);
        let t = common::random_structure(&mut rng, n, 4, DEFAULT_THETA);
        let graph = common::MoveGraph::new(n, DEFAULT_THETA, false);
        let opts = Ms2Options::default();
        let exact = ms2_exact(&s, &t, &opts).unwrap();
        let bnb = ms2_branch_and_bound(&s, &t, &opts).unwrap();
        verify_trajectory(&s, &t, &exact, false).unwrap();
        verify_trajectory(&s, &t, &bnb, false).unwrap();
        let best = graph.distance(&s, &t);
        prop_assert_eq!(exact.distance(), best);
        prop_assert_eq!(bnb.distance(), best);
    }

    #[test]
    fn crossing_tolerant_optimum_matches_search(n in 8usize..=13, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = common::random_structure(&mut rng, n, 4, DEFAULT_THETA);
        let t = common::random_structure(&mut rng, n, 4, DEFAULT_THETA);
        let graph = common::MoveGraph::new(n, DEFAULT_THETA, true);
        let pk = pk_ms2_distance(&s, &t).unwrap();
        prop_assert_eq!(pk, graph.distance(&s, &t));
        let traj = pk_ms2_trajectory(&s, &t).unwrap();
        prop_assert_eq!(traj.distance(), pk);
        verify_trajectory(&s, &t, &traj, true).unwrap();
    }
}
