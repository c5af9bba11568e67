mod common;

use std::collections::BTreeSet;

use common::arb_graph;
use metacut_core::cutspace::{
    apply_cutset, enumerate_cutsets, enumerate_cutsets_with_tree, has_isolated_node, is_minimal_cutset, spanning_tree,
    DEFAULT_RANK_CAP,
};
use metacut_core::{CutSetVector, SpanningTree, WeightedGraph};
use proptest::prelude::*;

fn mask(c: &CutSetVector) -> u64 {
    c.edge_ids().iter().fold(0, |m, &id| m | 1 << id)
}

/// Component label of every node with the edges in `removed` deleted (union-find).
fn components(g: &WeightedGraph, removed: u64) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..g.node_count()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (id, e) in g.edges().iter().enumerate() {
        if removed >> id & 1 == 0 {
            let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
            parent[a] = b;
        }
    }
    (0..g.node_count()).map(|x| find(&mut parent, x)).collect()
}

fn count_distinct(labels: &[usize]) -> usize {
    labels.iter().collect::<BTreeSet<_>>().len()
}

/// Minimal cut-sets of a connected graph by subset enumeration.
fn brute_force_cutsets(g: &WeightedGraph) -> BTreeSet<u64> {
    let m = g.edge_count();
    (1u64..1 << m)
        .filter(|&s| {
            let labels = components(g, s);
            count_distinct(&labels) == 2
                && (0..m)
                    .filter(|id| s >> id & 1 == 1)
                    .all(|id| labels[g.edge(id).u] != labels[g.edge(id).v])
        })
        .collect()
}

fn ring_closure(gens: &BTreeSet<u64>) -> BTreeSet<u64> {
    let mut span: BTreeSet<u64> = BTreeSet::from([0]);
    for &g in gens {
        let add: Vec<u64> = span.iter().map(|s| s ^ g).collect();
        span.extend(add);
    }
    span.remove(&0);
    span
}

/// Spanning tree from a shuffled edge order (Kruskal without weights).
fn shuffled_tree(g: &WeightedGraph, keys: &[u32]) -> SpanningTree {
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&id| (keys[id % keys.len()], id));
    let mut chosen = 0u64;
    let mut branches = Vec::new();
    for id in order {
        let labels = components(g, !chosen);
        let e = g.edge(id);
        if labels[e.u] != labels[e.v] {
            chosen |= 1 << id;
            branches.push(id);
        }
    }
    SpanningTree::from_edges(g, &branches).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_is_the_cut_space(g in arb_graph(2, 6, true, false)) {
        prop_assume!(g.edge_count() <= 10);
        let all: BTreeSet<u64> = enumerate_cutsets(&g).unwrap().iter().map(mask).collect();
        let truth = brute_force_cutsets(&g);
        prop_assert_eq!(all.len(), (1usize << (g.node_count() - 1)) - 1);
        prop_assert_eq!(&all, &ring_closure(&truth));
        // minimal members are exactly the brute-force cut-sets
        let minimal: BTreeSet<u64> = enumerate_cutsets(&g)
            .unwrap()
            .iter()
            .filter(|c| is_minimal_cutset(&g, c))
            .map(mask)
            .collect();
        prop_assert_eq!(minimal, truth);
    }

    #[test]
    fn ring_sums_stay_inside(g in arb_graph(2, 6, true, true)) {
        let all = enumerate_cutsets(&g).unwrap();
        let set: BTreeSet<u64> = all.iter().map(mask).collect();
        for a in &all {
            for b in &all {
                let s = a.ring_sum(b).unwrap();
                prop_assert!(s.is_zero() || set.contains(&mask(&s)));
            }
        }
    }

    #[test]
    fn basis_independent(g in arb_graph(2, 6, true, false), keys in proptest::collection::vec(any::<u32>(), 1..16)) {
        let a: BTreeSet<u64> = enumerate_cutsets(&g).unwrap().iter().map(mask).collect();
        let t = shuffled_tree(&g, &keys);
        let b: BTreeSet<u64> = enumerate_cutsets_with_tree(&g, &t, DEFAULT_RANK_CAP).unwrap().iter().map(mask).collect();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn isolated_node_scan_matches_components(g in arb_graph(2, 6, true, false)) {
        for c in enumerate_cutsets(&g).unwrap() {
            let labels = components(&g, mask(&c));
            let singleton = labels.iter().any(|l| labels.iter().filter(|x| *x == l).count() == 1);
            prop_assert_eq!(has_isolated_node(&g, &c), singleton);
            let parts = apply_cutset(&g, &c);
            prop_assert_eq!(parts.len(), count_distinct(&labels));
            if is_minimal_cutset(&g, &c) {
                prop_assert_eq!(parts.len(), 2);
            }
        }
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in arb_graph(1, 9, false, false)) {
        let l = g.laplacian().into_matrix();
        for i in 0..g.node_count() {
            prop_assert!(l.row(i).iter().sum::<f64>().abs() <= 1e-12 * l.norm_inf().max(1.0));
            for j in 0..g.node_count() {
                prop_assert_eq!(l[(i, j)], l[(j, i)]);
            }
        }
    }
}

#[test]
fn bfs_tree_is_a_spanning_tree() {
    let g = common::g56();
    let t = spanning_tree(&g).unwrap();
    assert_eq!(t.rank(), 4);
    assert_eq!(
        count_distinct(&components(&g, !t.branches().iter().fold(0u64, |m, &b| m | 1 << b))),
        1
    );
}
