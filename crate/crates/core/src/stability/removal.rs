//! Safe edge deletion via rank-one and rank-r Laplacian updates.
//!
//! When `v = e_i - e_j` is an eigenvector of `L(G)` with eigenvalue `lambda`,
//! deleting edge `(i, j)` of weight `w` subtracts `w v v^T` and changes only
//! that eigenvalue, to `lambda - 2w`. Several such deletions act on the span
//! of their difference vectors and leave the rest of the spectrum alone.

use alloc::vec;
use alloc::vec::Vec;

use super::MARGINAL_TOL;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{dot, eigen_sym, norm2, SquareMatrix};

/// Relative tolerance of the eigenvector-form screen.
const SCREEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct RemovalDetail {
    /// Eigenvalue `lambda_k` of `L(G)` for each requested edge, in request order.
    pub lambdas: Vec<f64>,
    /// Spectrum of the edge-deleted Laplacian restricted to the span of the
    /// difference vectors, ascending.
    pub updated: Vec<f64>,
    /// Smallest eigenvalue outside that span, other than the uniform mode's zero.
    pub untouched_min: Option<f64>,
}

impl RemovalDetail {
    pub fn min_updated(&self) -> Option<f64> {
        self.updated.first().copied()
    }

    /// `lambda_2` of the edge-deleted graph.
    pub fn lambda2_after(&self) -> Option<f64> {
        match (self.min_updated(), self.untouched_min) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RemovalVerdict {
    Safe(RemovalDetail),
    Unsafe(RemovalDetail),
    /// `e_i - e_j` is not a usable eigenvector for this edge.
    NotApplicable {
        i: usize,
        j: usize,
        reason: &'static str,
    },
}

impl RemovalVerdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, Self::Safe(_))
    }

    pub fn detail(&self) -> Option<&RemovalDetail> {
        match self {
            Self::Safe(d) | Self::Unsafe(d) => Some(d),
            Self::NotApplicable { .. } => None,
        }
    }
}

/// Whether deleting edge `(i, j)` keeps `lambda_2 >= tau`, decided by the
/// rank-one update when `e_i - e_j` is an eigenvector of `L(G)`.
pub fn safe_single_edge_removal(g: &WeightedGraph, i: usize, j: usize, tau: f64) -> Result<RemovalVerdict> {
    safe_rank_r_removal(g, &[(i, j)], tau)
}

/// Rank-r form of [`safe_single_edge_removal`] for several edges deleted together.
pub fn safe_rank_r_removal(g: &WeightedGraph, edges: &[(usize, usize)], tau: f64) -> Result<RemovalVerdict> {
    let mut ids = Vec::with_capacity(edges.len());
    for &(i, j) in edges {
        let id = g.find_edge(i, j).ok_or(Error::NoSuchEdge(i, j))?;
        if ids.contains(&id) {
            return Err(Error::DuplicateEdgeInRequest(i, j));
        }
        ids.push(id);
    }

    let lap = g.laplacian().into_matrix();
    let tol = SCREEN_TOL * lap.norm_inf().max(1.0);
    let mut lambdas = Vec::with_capacity(ids.len());
    for &id in &ids {
        let e = g.edge(id);
        match screen(&lap, e.u, e.v, e.w, tol) {
            Ok(l) => lambdas.push(l),
            Err(reason) => return Ok(RemovalVerdict::NotApplicable { i: e.u, j: e.v, reason }),
        }
    }

    let non_adjacent = ids.iter().enumerate().all(|(a, &x)| {
        ids[a + 1..].iter().all(|&y| {
            let (ex, ey) = (g.edge(x), g.edge(y));
            !ey.touches(ex.u) && !ey.touches(ex.v)
        })
    });
    let (mut updated, span) = if non_adjacent {
        let up = ids
            .iter()
            .zip(&lambdas)
            .map(|(&id, l)| l - 2.0 * g.edge(id).w)
            .collect();
        (up, lambdas.clone())
    } else {
        restricted_spectra(g, &lap, &ids)?
    };
    updated.sort_by(f64::total_cmp);

    let mut rest = eigen_sym(&lap)?.eigenvalues;
    for s in &span {
        if let Some(k) = nearest(&rest, *s) {
            rest.remove(k);
        }
    }
    // the uniform vector is orthogonal to every difference vector
    if !rest.is_empty() {
        rest.remove(0);
    }
    let detail = RemovalDetail {
        lambdas,
        updated,
        untouched_min: rest.first().copied(),
    };

    let floor = tau - MARGINAL_TOL * tau.abs().max(1.0);
    let ok = detail.min_updated().is_none_or(|u| u >= floor) && detail.untouched_min.is_none_or(|u| u >= floor);
    Ok(if ok {
        RemovalVerdict::Safe(detail)
    } else {
        RemovalVerdict::Unsafe(detail)
    })
}

/// Eigenvalue of `e_i - e_j` under `lap`, or why it is not an eigenvector.
fn screen(lap: &SquareMatrix, i: usize, j: usize, w: f64, tol: f64) -> core::result::Result<f64, &'static str> {
    if (lap[(i, i)] - lap[(j, j)]).abs() > tol {
        return Err("diagonal entries differ");
    }
    let n = lap.dim();
    let off = (0..n)
        .filter(|&k| k != i && k != j)
        .any(|k| (lap[(k, i)] - lap[(k, j)]).abs() > tol);
    let ci = lap[(i, i)] - lap[(i, j)];
    let cj = lap[(j, i)] - lap[(j, j)];
    if off || (ci + cj).abs() > tol {
        return Err("column difference is not proportional to e_i - e_j");
    }
    if ci.abs() <= tol {
        return Err("eigenvalue is zero");
    }
    if (w - ci).abs() <= tol {
        return Err("edge weight equals the eigenvalue");
    }
    Ok(ci)
}

/// Spectra of `L(G)` and `L(G')` restricted to span{e_i - e_j} over the
/// deleted edges, computed in an orthonormal basis of that span.
fn restricted_spectra(g: &WeightedGraph, lap: &SquareMatrix, ids: &[usize]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = g.node_count();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for &id in ids {
        let e = g.edge(id);
        let mut v = vec![0.0; n];
        v[e.u] = 1.0;
        v[e.v] = -1.0;
        for q in &basis {
            let c = dot(q, &v);
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= c * b);
        }
        let len = norm2(&v);
        if len > SCREEN_TOL {
            v.iter_mut().for_each(|a| *a /= len);
            basis.push(v);
        }
    }
    let reduced = g.without_edges(ids).laplacian().into_matrix();
    let before = eigen_sym(&project(lap, &basis))?.eigenvalues;
    let after = eigen_sym(&project(&reduced, &basis))?.eigenvalues;
    Ok((after, before))
}

/// `Q^T M Q` for orthonormal columns `q`, symmetrised.
fn project(m: &SquareMatrix, q: &[Vec<f64>]) -> SquareMatrix {
    let d = q.len();
    let mq: Vec<Vec<f64>> = q.iter().map(|c| m.mul_vec(c)).collect();
    let mut out = SquareMatrix::zeros(d);
    for a in 0..d {
        for b in a..d {
            let v = 0.5 * (dot(&q[a], &mq[b]) + dot(&q[b], &mq[a]));
            out[(a, b)] = v;
            out[(b, a)] = v;
        }
    }
    out
}

fn nearest(values: &[f64], x: f64) -> Option<usize> {
    (0..values.len()).min_by(|&a, &b| (values[a] - x).abs().total_cmp(&(values[b] - x).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::spectral::algebraic_connectivity;

    fn g56() -> WeightedGraph {
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

    #[test]
    fn k4_single_edge() {
        let k4 = families::complete(4);
        let v = safe_single_edge_removal(&k4, 0, 1, 2.0).unwrap();
        let d = v.detail().unwrap();
        assert!(v.is_safe());
        assert_eq!(d.lambdas, vec![4.0]);
        assert!((d.min_updated().unwrap() - 2.0).abs() < 1e-12);
        assert!(!safe_single_edge_removal(&k4, 0, 1, 2.5).unwrap().is_safe());
        let after = algebraic_connectivity(&k4.without_edges(&[0])).unwrap();
        assert!((after - 2.0).abs() < 1e-9);
    }

    #[test]
    fn weighted_example_not_applicable() {
        assert_eq!(
            safe_single_edge_removal(&g56(), 0, 1, 0.0).unwrap(),
            RemovalVerdict::NotApplicable {
                i: 0,
                j: 1,
                reason: "diagonal entries differ"
            }
        );
    }

    #[test]
    fn equal_diagonal_but_not_eigenvector() {
        // C4: equal degrees, but neighbours differ
        let g = WeightedGraph::from_edge_list(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap();
        let v = safe_single_edge_removal(&g, 0, 1, 0.0).unwrap();
        assert!(matches!(v, RemovalVerdict::NotApplicable { .. }));
    }

    #[test]
    fn errors() {
        let k4 = families::complete(4);
        assert_eq!(
            safe_single_edge_removal(&g56(), 0, 2, 0.0),
            Err(Error::NoSuchEdge(0, 2))
        );
        assert_eq!(
            safe_rank_r_removal(&k4, &[(0, 1), (1, 0)], 0.0),
            Err(Error::DuplicateEdgeInRequest(1, 0))
        );
    }

    #[test]
    fn k4_matching() {
        let k4 = families::complete(4);
        let v = safe_rank_r_removal(&k4, &[(0, 1), (2, 3)], 2.0).unwrap();
        assert!(v.is_safe());
        let d = v.detail().unwrap();
        assert_eq!(d.updated, vec![2.0, 2.0]);
        assert_eq!(d.untouched_min, Some(4.0));
    }

    #[test]
    fn k4_adjacent_pair_matches_recomputation() {
        let k4 = families::complete(4);
        for tau in [1.0, 1.5, 2.0, 3.0] {
            let v = safe_rank_r_removal(&k4, &[(0, 1), (0, 2)], tau).unwrap();
            let gp = k4.without_edges(&[k4.find_edge(0, 1).unwrap(), k4.find_edge(0, 2).unwrap()]);
            let l2 = algebraic_connectivity(&gp).unwrap();
            assert_eq!(v.is_safe(), l2 >= tau - 1e-9, "tau {tau}");
            assert!((v.detail().unwrap().lambda2_after().unwrap() - l2).abs() < 1e-9);
        }
    }

    #[test]
    fn dependent_difference_vectors() {
        // a triangle inside K4: three vectors spanning a plane
        let k4 = families::complete(4);
        let v = safe_rank_r_removal(&k4, &[(0, 1), (1, 2), (0, 2)], 0.0).unwrap();
        let d = v.detail().unwrap();
        assert_eq!(d.updated.len(), 2);
        let gp = k4.without_edges(&[0, 1, 3]);
        let l2 = algebraic_connectivity(&gp).unwrap();
        assert!((d.lambda2_after().unwrap() - l2).abs() < 1e-9);
    }

    #[test]
    fn empty_request_checks_lambda2() {
        let k4 = families::complete(4);
        assert!(safe_rank_r_removal(&k4, &[], 4.0).unwrap().is_safe());
        assert!(!safe_rank_r_removal(&k4, &[], 4.5).unwrap().is_safe());
    }

    #[test]
    fn general_route_agrees_with_closed_form() {
        let k6 = families::complete_weighted(6, 1.5);
        let ids = [k6.find_edge(0, 1).unwrap(), k6.find_edge(2, 3).unwrap()];
        let (after, before) = restricted_spectra(&k6, &k6.laplacian().into_matrix(), &ids).unwrap();
        for (a, b) in after.iter().zip(&before) {
            assert!((b - 9.0).abs() < 1e-9);
            assert!((a - 6.0).abs() < 1e-9);
        }
    }
}
