//! The GF(2) cut space of a graph: spanning trees, fundamental cut-sets,
//! ring sums and exhaustive enumeration.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use bitvec::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Component, WeightedGraph};

/// Default cap on the graph rank accepted by [`enumerate_cutsets`].
pub const DEFAULT_RANK_CAP: usize = 30;

/// Indicator vector over the edges of a graph; bit `k` is edge `k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CutSetVector {
    bits: BitVec<u64, Lsb0>,
}

impl CutSetVector {
    pub fn zeros(m: usize) -> Self {
        Self {
            bits: bitvec![u64, Lsb0; 0; m],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self {
            bits: bits.iter().copied().collect(),
        }
    }

    pub fn from_edge_ids(m: usize, ids: &[usize]) -> Self {
        let mut v = Self::zeros(m);
        for &id in ids {
            v.bits.set(id, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, edge: usize) -> bool {
        self.bits[edge]
    }

    pub fn set(&mut self, edge: usize, value: bool) {
        self.bits.set(edge, value);
    }

    pub fn is_zero(&self) -> bool {
        self.bits.not_any()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }

    /// Edge ids with bit 1, ascending.
    pub fn edge_ids(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.bits.iter().by_vals().collect()
    }

    /// Componentwise XOR.
    pub fn ring_sum(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        let mut bits = self.bits.clone();
        bits ^= other.bits.as_bitslice();
        Ok(Self { bits })
    }

    fn xor_assign(&mut self, other: &Self) {
        self.bits ^= other.bits.as_bitslice();
    }

    /// `{e1,e4}`-style listing with 1-based edge labels.
    pub fn edge_label_list(&self) -> String {
        let mut s = String::from("{");
        for (k, id) in self.bits.iter_ones().enumerate() {
            if k > 0 {
                s.push(',');
            }
            fmt::Write::write_fmt(&mut s, format_args!("e{}", id + 1)).unwrap();
        }
        s.push('}');
        s
    }
}

impl fmt::Debug for CutSetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for CutSetVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, b) in self.bits.iter().by_vals().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(")")
    }
}

/// `n - 1` edge ids forming a spanning tree, in branch order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    branches: Vec<usize>,
}

impl SpanningTree {
    /// Validates that `branches` is a spanning tree of `g`; the order given
    /// fixes the order of the fundamental cut-sets.
    pub fn from_edges(g: &WeightedGraph, branches: &[usize]) -> Result<Self> {
        let n = g.node_count();
        if n == 0 || branches.len() != n - 1 {
            return Err(Error::NotASpanningTree("wrong number of branches"));
        }
        let mut in_tree = vec![false; g.edge_count()];
        for &b in branches {
            if b >= g.edge_count() {
                return Err(Error::NotASpanningTree("edge id out of range"));
            }
            if in_tree[b] {
                return Err(Error::NotASpanningTree("repeated branch"));
            }
            in_tree[b] = true;
        }
        // n - 1 edges spanning one component cannot contain a cycle.
        if g.component_labels_without(|id| !in_tree[id]).1 != 1 {
            return Err(Error::NotASpanningTree("branches do not span the graph"));
        }
        Ok(Self {
            branches: branches.to_vec(),
        })
    }

    pub fn branches(&self) -> &[usize] {
        &self.branches
    }

    /// Graph rank `r = n - 1`.
    pub fn rank(&self) -> usize {
        self.branches.len()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.branches.contains(&edge)
    }
}

/// Breadth-first spanning tree rooted at node 0, neighbours taken in
/// ascending node id. Branches are listed in discovery order.
pub fn spanning_tree(g: &WeightedGraph) -> Result<SpanningTree> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::Empty);
    }
    let mut seen = vec![false; n];
    let mut branches = Vec::with_capacity(n - 1);
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(x) = queue.pop_front() {
        let mut next: Vec<(usize, usize)> = g.incident(x).iter().map(|&id| (g.edge(id).other(x), id)).collect();
        next.sort_unstable();
        for (y, id) in next {
            if !seen[y] {
                seen[y] = true;
                branches.push(id);
                queue.push_back(y);
            }
        }
    }
    if branches.len() != n - 1 {
        return Err(Error::GraphDisconnected);
    }
    Ok(SpanningTree { branches })
}

/// One fundamental cut-set per branch, in branch order: the edges crossing
/// the node bipartition left by deleting that branch from the tree.
pub fn fundamental_cutsets(g: &WeightedGraph, t: &SpanningTree) -> Result<Vec<CutSetVector>> {
    let t = SpanningTree::from_edges(g, t.branches())?;
    let m = g.edge_count();
    let mut in_tree = vec![false; m];
    for &b in t.branches() {
        in_tree[b] = true;
    }
    let basis = t
        .branches()
        .iter()
        .map(|&branch| {
            let (label, _) = g.component_labels_without(|id| !in_tree[id] || id == branch);
            let mut v = CutSetVector::zeros(m);
            for (id, e) in g.edges().iter().enumerate() {
                if label[e.u] != label[e.v] {
                    v.set(id, true);
                }
            }
            v
        })
        .collect();
    Ok(basis)
}

pub fn ring_sum(a: &CutSetVector, b: &CutSetVector) -> Result<CutSetVector> {
    a.ring_sum(b)
}

/// Every nonzero vector of the cut space, using the BFS spanning tree.
pub fn enumerate_cutsets(g: &WeightedGraph) -> Result<Vec<CutSetVector>> {
    enumerate_cutsets_capped(g, DEFAULT_RANK_CAP)
}

pub fn enumerate_cutsets_capped(g: &WeightedGraph, rank_cap: usize) -> Result<Vec<CutSetVector>> {
    let t = spanning_tree(g)?;
    enumerate_cutsets_with_tree(g, &t, rank_cap)
}

/// All `2^r - 1` nonempty XOR combinations of the fundamental basis of `t`.
/// Vector `k - 1` is the combination selected by bitmask `k` (bit `i` is
/// the `i`-th fundamental cut-set).
pub fn enumerate_cutsets_with_tree(g: &WeightedGraph, t: &SpanningTree, rank_cap: usize) -> Result<Vec<CutSetVector>> {
    let rank = t.rank();
    if rank > rank_cap || rank >= usize::BITS as usize {
        return Err(Error::RankTooLarge { rank, cap: rank_cap });
    }
    let basis = fundamental_cutsets(g, t)?;
    let total = (1usize << rank) - 1;
    let mut out = Vec::with_capacity(total);
    for mask in 1..=total {
        let mut v = CutSetVector::zeros(g.edge_count());
        for (i, b) in basis.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v.xor_assign(b);
            }
        }
        out.push(v);
    }
    Ok(out)
}

/// Connected components left after removing the edges of `c`, ordered by
/// smallest original node id.
pub fn apply_cutset(g: &WeightedGraph, c: &CutSetVector) -> Vec<Component> {
    let (label, count) = g.component_labels_without(|id| c.get(id));
    let mut groups = vec![Vec::new(); count];
    for (node, &l) in label.iter().enumerate() {
        groups[l].push(node);
    }
    groups
        .iter()
        .map(|nodes| g.induced_without(nodes, |id| c.get(id)))
        .collect()
}

/// Whether removing `c` leaves some node with no remaining edges.
///
/// Walks the set bits of `c`; for each edge checks whether every edge
/// incident on either endpoint also lies in `c`.
pub fn has_isolated_node(g: &WeightedGraph, c: &CutSetVector) -> bool {
    c.bits.iter_ones().any(|id| {
        let e = g.edge(id);
        [e.u, e.v].into_iter().any(|x| g.incident(x).iter().all(|&f| c.get(f)))
    })
}

pub fn cut_weight(g: &WeightedGraph, c: &CutSetVector) -> f64 {
    c.bits.iter_ones().map(|id| g.edge(id).w).sum()
}

/// True iff `c` is a single (minimal) cut-set of a connected `g`: removing
/// it leaves exactly two components and every edge of `c` joins them.
pub fn is_minimal_cutset(g: &WeightedGraph, c: &CutSetVector) -> bool {
    let (label, count) = g.component_labels_without(|id| c.get(id));
    count == 2
        && c.bits.iter_ones().all(|id| {
            let e = g.edge(id);
            label[e.u] != label[e.v]
        })
}
