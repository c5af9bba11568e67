//! Algebraic connectivity: Fiedler pairs, cheap bounds on `lambda_2`, and
//! closed forms for unit-weight graph families.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{eigen_sym, SpectralSummary};

/// Eigenvalues below this count as zero when deciding connectivity from a spectrum.
pub const ZERO_EIGENVALUE_TOL: f64 = 1e-8;

/// Laplacian spectrum of `g`.
pub fn laplacian_spectrum(g: &WeightedGraph) -> Result<SpectralSummary> {
    eigen_sym(g.laplacian().matrix())
}

/// Second-smallest Laplacian eigenpair.
#[derive(Debug, Clone, PartialEq)]
pub struct Fiedler {
    /// `lambda_2`; exactly 0 when the graph is disconnected.
    pub value: f64,
    /// Unit eigenvector for `value`. Any vector of the eigenspace when `lambda_2` is repeated.
    pub vector: Vec<f64>,
    pub connected: bool,
}

/// Fiedler value and vector of `g` (needs `n >= 2`).
///
/// Connectivity is decided structurally; for a disconnected graph the
/// value is reported as exactly 0.
pub fn fiedler(g: &WeightedGraph) -> Result<Fiedler> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n });
    }
    let s = laplacian_spectrum(g)?;
    let connected = g.is_connected();
    Ok(Fiedler {
        value: if connected { s.eigenvalues[1] } else { 0.0 },
        vector: s.vector(1),
        connected,
    })
}

/// `lambda_2` of `g`, with the conventions used by the partitioners: 0 for
/// a disconnected graph and for graphs with fewer than two nodes.
pub fn algebraic_connectivity(g: &WeightedGraph) -> Result<f64> {
    if g.node_count() < 2 {
        return Ok(0.0);
    }
    Ok(fiedler(g)?.value)
}

/// A single bound on `lambda_2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub name: &'static str,
    pub value: f64,
    /// Whether the bound may be relied on for this graph.
    pub applicable: bool,
}

/// Lower and upper bounds on `lambda_2`.
///
/// Distances are shortest paths with edge length `1 / w` (hop counts for
/// unit weights). The bounds come from the unweighted literature, so they
/// are advisory unless `unweighted_exact` is set.
#[derive(Debug, Clone, PartialEq)]
pub struct Lambda2Bounds {
    pub lower: Vec<Bound>,
    pub upper: Vec<Bound>,
    pub unweighted_exact: bool,
}

impl Lambda2Bounds {
    /// Largest applicable lower bound.
    pub fn best_lower(&self) -> Option<f64> {
        best(&self.lower, f64::max)
    }

    /// Smallest applicable upper bound.
    pub fn best_upper(&self) -> Option<f64> {
        best(&self.upper, f64::min)
    }
}

fn best(bounds: &[Bound], pick: fn(f64, f64) -> f64) -> Option<f64> {
    bounds.iter().filter(|b| b.applicable).map(|b| b.value).reduce(pick)
}

pub const LOWER_DIAMETER: &str = "4/(nD)";
pub const LOWER_MEAN_DISTANCE: &str = "4/(2(n-1)dbar-n+2)";
pub const LOWER_ADJACENT_DEGREES: &str = "max_adj(d_i+d_j)-(n-2)";
pub const UPPER_NON_ADJACENT: &str = "min_nonadj(d_i+d_j)/2";
pub const UPPER_MIN_DEGREE: &str = "n/(n-1)*delta";
pub const UPPER_EDGE_CUT: &str = "n*E(S,S')/(|S|(n-|S|))";

/// Evaluates the six classical bounds on `lambda_2` for a connected graph.
///
/// `subset` selects `S` for the edge-cut upper bound, which is reported as
/// inapplicable when `S` is absent, empty or the whole node set.
///
/// The `max_adj(d_i+d_j)-(n-2)` lower bound is computed and reported but
/// never applicable: it fails on the path P3 (value 2, `lambda_2` = 1).
pub fn lambda2_bounds(g: &WeightedGraph, subset: Option<&[usize]>) -> Result<Lambda2Bounds> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::TooSmall { needed: 2, got: n });
    }
    if !g.is_connected() {
        return Err(Error::GraphDisconnected);
    }
    let nf = n as f64;
    let d = g.degrees();
    let dist = inverse_weight_distances(g);

    let mut diameter = 0.0f64;
    let mut total = 0.0;
    for (i, row) in dist.iter().enumerate() {
        for &dij in &row[i + 1..] {
            diameter = diameter.max(dij);
            total += dij;
        }
    }
    let mean_distance = total / (nf * (nf - 1.0) / 2.0);

    let adjacent_degrees = g
        .edges()
        .iter()
        .map(|e| d[e.u] + d[e.v])
        .fold(f64::NEG_INFINITY, f64::max);

    let lower = vec![
        Bound {
            name: LOWER_DIAMETER,
            value: 4.0 / (nf * diameter),
            applicable: true,
        },
        Bound {
            name: LOWER_MEAN_DISTANCE,
            value: 4.0 / (2.0 * (nf - 1.0) * mean_distance - nf + 2.0),
            applicable: true,
        },
        Bound {
            name: LOWER_ADJACENT_DEGREES,
            value: adjacent_degrees - (nf - 2.0),
            applicable: false,
        },
    ];

    let mut non_adjacent = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            if g.find_edge(i, j).is_none() {
                non_adjacent = non_adjacent.min(0.5 * (d[i] + d[j]));
            }
        }
    }
    let min_degree = d.iter().copied().fold(f64::INFINITY, f64::min);

    let edge_cut = subset.and_then(|s| {
        let mut inside = vec![false; n];
        for &x in s {
            if x >= n {
                return None;
            }
            inside[x] = true;
        }
        let size = inside.iter().filter(|&&b| b).count();
        if size == 0 || size == n {
            return None;
        }
        let cut: f64 = g
            .edges()
            .iter()
            .filter(|e| inside[e.u] != inside[e.v])
            .map(|e| e.w)
            .sum();
        let size = size as f64;
        Some(nf * cut / (size * (nf - size)))
    });

    let upper = vec![
        Bound {
            name: UPPER_NON_ADJACENT,
            value: non_adjacent,
            applicable: non_adjacent.is_finite(),
        },
        Bound {
            name: UPPER_MIN_DEGREE,
            value: nf / (nf - 1.0) * min_degree,
            applicable: true,
        },
        Bound {
            name: UPPER_EDGE_CUT,
            value: edge_cut.unwrap_or(f64::NAN),
            applicable: edge_cut.is_some(),
        },
    ];

    Ok(Lambda2Bounds {
        lower,
        upper,
        unweighted_exact: g.is_unit_weighted(),
    })
}

/// All-pairs shortest paths with edge length `1 / w`.
fn inverse_weight_distances(g: &WeightedGraph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut dist = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in g.edges() {
        let len = 1.0 / e.w;
        dist[e.u][e.v] = dist[e.u][e.v].min(len);
        dist[e.v][e.u] = dist[e.v][e.u].min(len);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = dist[i][k] + dist[k][j];
                if via < dist[i][j] {
                    dist[i][j] = via;
                }
            }
        }
    }
    dist
}

/// Unit-weight graph families with a closed-form `lambda_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialGraph {
    Path,
    Cycle,
    /// The 3-cube; `n` must be 8.
    Cube,
    Complete,
    Star,
}

/// Closed-form `lambda_2` of a unit-weight special graph on `n` nodes.
pub fn special_lambda2(kind: SpecialGraph, n: usize) -> Result<f64> {
    let nf = n as f64;
    match kind {
        SpecialGraph::Path if n >= 2 => Ok(2.0 * (1.0 - Float::cos(PI / nf))),
        SpecialGraph::Cycle if n >= 3 => Ok(2.0 * (1.0 - Float::cos(2.0 * PI / nf))),
        SpecialGraph::Cube if n == 8 => Ok(2.0),
        SpecialGraph::Complete if n >= 2 => Ok(nf),
        SpecialGraph::Star if n >= 3 => Ok(1.0),
        _ => Err(Error::InvalidN { n }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

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
    fn fiedler_of_worked_example() {
        let f = fiedler(&g56()).unwrap();
        assert!(close(f.value, 3.625, 1e-3), "{}", f.value);
        assert!(f.connected);
    }

    #[test]
    fn fiedler_of_k4() {
        let s = laplacian_spectrum(&families::complete(4)).unwrap();
        assert!(close(s.eigenvalues[0], 0.0, 1e-12));
        for j in 1..4 {
            assert!(close(s.eigenvalues[j], 4.0, 1e-9));
        }
    }

    #[test]
    fn fiedler_disconnected_is_zero() {
        let g = WeightedGraph::from_edge_list(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let f = fiedler(&g).unwrap();
        assert_eq!(f.value, 0.0);
        assert!(!f.connected);
        let one = WeightedGraph::from_edge_list(1, &[]).unwrap();
        assert_eq!(fiedler(&one), Err(Error::TooSmall { needed: 2, got: 1 }));
        assert_eq!(algebraic_connectivity(&one), Ok(0.0));
    }

    #[test]
    fn star_upper_bound() {
        let b = lambda2_bounds(&families::star(5), None).unwrap();
        let delta = b.upper.iter().find(|x| x.name == UPPER_MIN_DEGREE).unwrap();
        assert!(close(delta.value, 1.25, 1e-12));
        assert!(b.best_upper().unwrap() >= 1.0);
        assert!(b.unweighted_exact);
    }

    #[test]
    fn k4_edge_cut_bound_is_tight() {
        let g = families::complete(4);
        let b = lambda2_bounds(&g, Some(&[0])).unwrap();
        let cut = b.upper.iter().find(|x| x.name == UPPER_EDGE_CUT).unwrap();
        assert!(cut.applicable);
        assert!(close(cut.value, 4.0, 1e-12));
        // complete graph: no non-adjacent pair
        assert!(!b.upper[0].applicable);
    }

    #[test]
    fn p2_diameter_bound_is_exact() {
        let b = lambda2_bounds(&families::path(2), None).unwrap();
        assert!(close(b.lower[0].value, 2.0, 1e-12));
        assert_eq!(b.best_lower(), Some(2.0));
    }

    #[test]
    fn adjacent_degree_bound_is_never_applicable() {
        let g = families::path(3);
        let b = lambda2_bounds(&g, None).unwrap();
        assert!(close(b.lower[2].value, 2.0, 1e-12));
        assert!(!b.lower[2].applicable);
        assert!(b.lower[2].value > fiedler(&g).unwrap().value);
    }

    #[test]
    fn bounds_reject_disconnected() {
        let g = WeightedGraph::from_edge_list(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        assert_eq!(lambda2_bounds(&g, None), Err(Error::GraphDisconnected));
    }

    #[test]
    fn subset_edge_cases() {
        let g = families::complete(4);
        for s in [&[][..], &[0, 1, 2, 3][..], &[7][..]] {
            let b = lambda2_bounds(&g, Some(s)).unwrap();
            assert!(!b.upper[2].applicable);
        }
    }

    #[test]
    fn special_closed_forms() {
        assert!(close(special_lambda2(SpecialGraph::Path, 3).unwrap(), 1.0, 1e-12));
        assert_eq!(special_lambda2(SpecialGraph::Complete, 7), Ok(7.0));
        assert!(close(special_lambda2(SpecialGraph::Cycle, 4).unwrap(), 2.0, 1e-12));
        assert_eq!(special_lambda2(SpecialGraph::Cube, 8), Ok(2.0));
        assert_eq!(special_lambda2(SpecialGraph::Star, 6), Ok(1.0));
        assert_eq!(special_lambda2(SpecialGraph::Cube, 7), Err(Error::InvalidN { n: 7 }));
        assert!(special_lambda2(SpecialGraph::Cycle, 2).is_err());
        assert!(special_lambda2(SpecialGraph::Star, 2).is_err());
        assert!(special_lambda2(SpecialGraph::Path, 1).is_err());
    }
}
