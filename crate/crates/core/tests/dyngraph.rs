use emergence::dyngraph::*;
use proptest::prelude::*;

fn graphs() -> impl Strategy<Value = TemporalGraph> {
    (2usize..7, 1usize..9).prop_flat_map(|(nodes, steps)| {
        proptest::collection::vec(
            proptest::collection::vec((0..nodes, 0..nodes), 0..12),
            steps,
        )
        .prop_map(move |lists| {
            let lists: Vec<Vec<(usize, usize)>> = lists
                .into_iter()
                .map(|l| l.into_iter().filter(|(a, b)| a != b).collect())
                .collect();
            TemporalGraph::from_edge_lists(nodes, &lists).unwrap()
        })
    })
}

#[test]
fn turnover_counts_every_transition() {
    let g = TemporalGraph::from_edge_lists(3, &[vec![(0, 1)], vec![(0, 2)], vec![(0, 2)], vec![]])
        .unwrap();
    assert!((temporal_degree(&g, 0, 4).unwrap() - 1.5).abs() < 1e-15);
    assert_eq!(temporal_clustering(&g, 0, 3).unwrap(), Some(1.0));
    assert_eq!(temporal_clustering(&g, 0, 4).unwrap(), None);
}

proptest! {
    #[test]
    fn degree_is_nonnegative_and_additive(g in graphs(), split in 0usize..9) {
        let len = g.len();
        for i in 0..g.nodes() {
            let total = temporal_degree(&g, i, len).unwrap();
            prop_assert!(total >= 0.0 && total <= (len - 1) as f64);
            let a = 1 + split % len;
            let left = temporal_degree(&g, i, a).unwrap();
            let right = temporal_degree_between(&g, i, a - 1, len).unwrap();
            prop_assert!((left + right - total).abs() <= 1e-12);
        }
    }

    #[test]
    fn clustering_is_a_fraction_that_grows_with_history(g in graphs()) {
        let len = g.len();
        for i in 0..g.nodes() {
            let mut prev = 0.0;
            for history in 0..=len {
                if let Some(c) = temporal_clustering_window(&g, i, len, history).unwrap() {
                    prop_assert!((0.0..=1.0).contains(&c));
                    prop_assert!(c >= prev);
                    prev = c;
                }
            }
        }
    }
}
