#![allow(dead_code)]

use metacut_core::WeightedGraph;
use proptest::prelude::*;

/// Random graph on `min_n..=max_n` nodes. Connected graphs get a random
/// recursive tree as backbone before the extra edges are added.
pub fn arb_graph(min_n: usize, max_n: usize, connected: bool, unit: bool) -> impl Strategy<Value = WeightedGraph> {
    (min_n..=max_n).prop_flat_map(move |n| {
        let pairs = n * n.saturating_sub(1) / 2;
        let weight = if unit {
            Just(1.0).boxed()
        } else {
            (0.1f64..10.0).boxed()
        };
        (
            Just(n),
            proptest::collection::vec((0.0f64..1.0, weight.clone()), pairs),
            proptest::collection::vec((0.0f64..1.0, weight), n.saturating_sub(1)),
            0.1f64..0.9,
        )
            .prop_map(move |(n, extra, tree, density)| build(n, &extra, &tree, density, connected))
    })
}

fn build(n: usize, extra: &[(f64, f64)], tree: &[(f64, f64)], density: f64, connected: bool) -> WeightedGraph {
    let mut triples: Vec<(usize, usize, f64)> = Vec::new();
    if connected {
        for (k, &(pick, w)) in tree.iter().enumerate() {
            let child = k + 1;
            let parent = ((pick * child as f64) as usize).min(child - 1);
            triples.push((parent, child, w));
        }
    }
    let mut idx = 0;
    for u in 0..n {
        for v in (u + 1)..n {
            let (coin, w) = extra[idx];
            idx += 1;
            let present = triples.iter().any(|&(a, b, _)| (a, b) == (u, v));
            if !present && coin < density {
                triples.push((u, v, w));
            }
        }
    }
    WeightedGraph::from_edge_list(n, &triples).unwrap()
}

pub fn g56() -> WeightedGraph {
    WeightedGraph::from_edge_list(
        5,
        &[
            (0, 1, 3.0),
            (1, 2, 2.0),
            (2, 3, 3.0),
            (3, 4, 5.0),
            (4, 0, 2.0),
            (4, 1, 1.0),
        ],
    )
    .unwrap()
}

/// Sorted-multiset comparison.
pub fn same_multiset(a: &[f64], b: &[f64], tol: f64) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= tol)
}
