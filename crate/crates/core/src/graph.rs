//! Undirected weighted patch graphs and their Laplacians.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// A corridor between two patches; `w` is the diffusion rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl Edge {
    pub fn touches(&self, node: usize) -> bool {
        self.u == node || self.v == node
    }

    pub fn other(&self, node: usize) -> usize {
        if self.u == node {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected weighted graph on nodes `0..n`.
///
/// Edge ids are positions in the construction list and define the bit
/// layout of every [`CutSetVector`](crate::cutspace::CutSetVector).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    /// `incidence[node]` lists edge ids touching `node`, ascending.
    incidence: Vec<Vec<usize>>,
}

impl WeightedGraph {
    /// Validates and builds a graph from `(u, v, w)` triples.
    pub fn from_edge_list(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(triples.len());
        let mut incidence = vec![Vec::new(); n];
        for (id, &(u, v, w)) in triples.iter().enumerate() {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::IdOutOfRange { id: x, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonPositiveWeight { u, v, w });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge { u, v });
            }
            edges.push(Edge { u, v, w });
            incidence[u].push(id);
            incidence[v].push(id);
        }
        Ok(Self { n, edges, incidence })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Edge ids incident on `node`.
    pub fn incident(&self, node: usize) -> &[usize] {
        &self.incidence[node]
    }

    pub fn find_edge(&self, a: usize, b: usize) -> Option<usize> {
        if a >= self.n || b >= self.n {
            return None;
        }
        self.incidence[a]
            .iter()
            .copied()
            .find(|&id| self.edges[id].other(a) == b && self.edges[id].touches(b))
    }

    /// Weighted degree `d_i`.
    pub fn degree(&self, node: usize) -> f64 {
        self.incidence[node].iter().map(|&e| self.edges[e].w).sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    pub fn is_unit_weighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    /// Laplacian `L = D - W`.
    pub fn laplacian(&self) -> Laplacian {
        let mut m = SquareMatrix::zeros(self.n);
        for e in &self.edges {
            m[(e.u, e.v)] -= e.w;
            m[(e.v, e.u)] -= e.w;
            m[(e.u, e.u)] += e.w;
            m[(e.v, e.v)] += e.w;
        }
        Laplacian(m)
    }

    /// Component label per node, ignoring edges for which `removed(id)` is true.
    /// Labels are assigned in order of each component's smallest node.
    pub fn component_labels_without<F: Fn(usize) -> bool>(&self, removed: F) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(x) = queue.pop_front() {
                for &id in &self.incidence[x] {
                    if removed(id) {
                        continue;
                    }
                    let y = self.edges[id].other(x);
                    if label[y] == usize::MAX {
                        label[y] = count;
                        queue.push_back(y);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels_without(|_| false).1
    }

    /// An empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Subgraph induced by `nodes` (original ids, any order). Local id `k`
    /// corresponds to `nodes[k]`; edges keep their relative input order.
    pub fn induced(&self, nodes: &[usize]) -> Component {
        self.induced_without(nodes, |_| false)
    }

    pub(crate) fn induced_without<F: Fn(usize) -> bool>(&self, nodes: &[usize], removed: F) -> Component {
        let mut local = vec![usize::MAX; self.n];
        for (k, &x) in nodes.iter().enumerate() {
            local[x] = k;
        }
        let mut triples = Vec::new();
        let mut edge_ids = Vec::new();
        for (id, e) in self.edges.iter().enumerate() {
            if removed(id) {
                continue;
            }
            let (a, b) = (local[e.u], local[e.v]);
            if a != usize::MAX && b != usize::MAX {
                triples.push((a, b, e.w));
                edge_ids.push(id);
            }
        }
        let graph = WeightedGraph::from_edge_list(nodes.len(), &triples).expect("subgraph of a valid graph is valid");
        Component {
            graph,
            nodes: nodes.to_vec(),
            edge_ids,
        }
    }

    /// Copy of the graph with the listed edge ids removed (node set unchanged).
    pub fn without_edges(&self, ids: &[usize]) -> WeightedGraph {
        let triples: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(id, _)| !ids.contains(id))
            .map(|(_, e)| (e.u, e.v, e.w))
            .collect();
        WeightedGraph::from_edge_list(self.n, &triples).expect("edge removal keeps validity")
    }

    /// Copy with edge `id` reweighted to `w`.
    pub fn with_weight(&self, id: usize, w: f64) -> Result<WeightedGraph> {
        let triples: Vec<_> = self
            .edges
            .iter()
            .enumerate()
            .map(|(k, e)| (e.u, e.v, if k == id { w } else { e.w }))
            .collect();
        WeightedGraph::from_edge_list(self.n, &triples)
    }
}

/// Graph Laplacian: diagonal `d_i`, off-diagonal `-w_ij` on edges, zero elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian(pub SquareMatrix);

impl Laplacian {
    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> SquareMatrix {
        self.0
    }
}

/// A subgraph with the mapping from local node ids back to the parent graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub graph: WeightedGraph,
    /// `nodes[local] = original id`.
    pub nodes: Vec<usize>,
    /// Parent edge id of each local edge.
    pub edge_ids: Vec<usize>,
}

impl Component {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Unit-weight graphs with closed-form algebraic connectivity.
pub mod families {
    use super::*;

    fn build(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> WeightedGraph {
        let triples: Vec<_> = pairs.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
        WeightedGraph::from_edge_list(n, &triples).expect("family graphs are valid")
    }

    pub fn path(n: usize) -> WeightedGraph {
        build(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn cycle(n: usize) -> WeightedGraph {
        assert!(n >= 3, "cycle needs at least 3 nodes");
        build(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Complete graph with every edge weighted `w`.
    pub fn complete_weighted(n: usize, w: f64) -> WeightedGraph {
        let triples: Vec<_> = (0..n).flat_map(|i| ((i + 1)..n).map(move |j| (i, j, w))).collect();
        WeightedGraph::from_edge_list(n, &triples).expect("complete graph is valid")
    }

    pub fn complete(n: usize) -> WeightedGraph {
        complete_weighted(n, 1.0)
    }

    /// Star with centre 0 and `n - 1` leaves.
    pub fn star(n: usize) -> WeightedGraph {
        build(n, (1..n).map(|i| (0, i)))
    }

    /// The 3-cube `Q3` on 8 nodes.
    pub fn cube() -> WeightedGraph {
        let pairs = (0..8usize).flat_map(|i| (0..3).map(move |b| (i, i ^ (1 << b))).filter(|(a, c)| a < c));
        build(8, pairs)
    }
}
