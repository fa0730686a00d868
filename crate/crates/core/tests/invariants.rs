//! Random graphs on 7 to 9 vertices against full arrangement enumeration.
//! Exhaustive sweeps over every graph stop at 6 vertices; beyond that the
//! graph count makes enumeration impractical, so graphs are sampled.

use proptest::prelude::*;

use rla::bounds::{minla_lower, upper_combined, BoundsReport};
use rla::ensembles::complete_edges;
use rla::exact::int;
use rla::moments::{expected_d, second_moment_d, variance_d};
use rla::oracle::{enumerate_distribution, OracleConfig};
use rla::Graph;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (7usize..=9).prop_flat_map(|n| {
        let pairs = complete_edges(n);
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |edges| Graph::new(n, edges).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_and_bounds_match_enumeration(g in graph_strategy()) {
        let dist = enumerate_distribution(&g, &OracleConfig::default()).unwrap();
        let (n, m) = (g.n() as u64, g.m() as u64);
        prop_assert_eq!(dist.mean(), expected_d(n, m).unwrap());
        prop_assert_eq!(dist.second_moment(), second_moment_d(&g));
        prop_assert_eq!(dist.variance(), variance_d(&g));
        prop_assert!(int(dist.max()) <= upper_combined(&g));
        prop_assert!(dist.min() as u128 >= minla_lower(n, m).unwrap());
        prop_assert!(BoundsReport::from_graph(&g).is_consistent());
    }
}

#[test]
fn third_moment_bound_holds_on_small_graphs() {
    let config = OracleConfig::default();
    for n in 2..=6 {
        for g in rla::oracle::enumerate_all_graphs(n, &config).unwrap() {
            let dist = enumerate_distribution(&g, &config).unwrap();
            let v = rla::exact::to_f64(&dist.variance());
            if v == 0.0 {
                continue;
            }
            let w = rla::exact::to_f64(&dist.third_central_moment());
            let bound = rla::bounds::sharma_minla_upper(dist.max() as f64, v, w).unwrap();
            assert!(bound >= dist.min() as f64 - 1e-9, "{:?}: {bound} < {}", g.edges(), dist.min());
        }
    }
}
