//! Edge and alternating principles: edge deletions that keep a given
//! Laplacian eigenvector an eigenvector.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::linalg::{dot, norm_inf};

/// Relative tolerance for comparing eigenvector components.
const COMPONENT_TOL: f64 = 1e-9;
/// Relative residual accepted for an eigenpair.
const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeCandidate {
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    /// The vector stayed an eigenvector for the same eigenvalue after deletion.
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlternatingOutcome {
    /// Edges whose endpoint components are opposite and nonzero.
    pub edges: Vec<usize>,
    /// `lambda - 2w` when every listed edge has weight `w`; `lambda` if none
    /// are listed; `None` for mixed weights.
    pub new_lambda: Option<f64>,
    /// Rayleigh quotient of the vector on the edge-deleted graph.
    pub rayleigh: f64,
    /// The vector is an eigenvector of the edge-deleted graph for `new_lambda`.
    pub verified: bool,
}

fn residual(g: &WeightedGraph, lambda: f64, x: &[f64]) -> f64 {
    let lx = g.laplacian().matrix().mul_vec(x);
    lx.iter()
        .zip(x)
        .map(|(a, b)| (a - lambda * b).abs())
        .fold(0.0, f64::max)
}

fn residual_tol(g: &WeightedGraph, x: &[f64]) -> f64 {
    RESIDUAL_TOL * g.laplacian().matrix().norm_inf().max(1.0) * norm_inf(x)
}

fn check_eigenpair(g: &WeightedGraph, lambda: f64, x: &[f64]) -> Result<f64> {
    if x.len() != g.node_count() {
        return Err(Error::DimensionMismatch {
            expected: g.node_count(),
            got: x.len(),
        });
    }
    let scale = norm_inf(x);
    let r = residual(g, lambda, x);
    if scale == 0.0 || !scale.is_finite() || r > residual_tol(g, x) {
        return Err(Error::NotAnEigenpair { residual: r });
    }
    Ok(scale)
}

/// Edges whose endpoints carry equal components of `x`. Deleting any one of
/// them keeps `(lambda, x)` an eigenpair.
pub fn merris_edge_principle(g: &WeightedGraph, lambda: f64, x: &[f64]) -> Result<Vec<EdgeCandidate>> {
    let tol = COMPONENT_TOL * check_eigenpair(g, lambda, x)?;
    Ok(g.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| (x[e.u] - x[e.v]).abs() <= tol)
        .map(|(id, e)| {
            let h = g.without_edges(&[id]);
            EdgeCandidate {
                edge: id,
                u: e.u,
                v: e.v,
                verified: residual(&h, lambda, x) <= residual_tol(&h, x),
            }
        })
        .collect())
}

/// Edges whose endpoints carry opposite nonzero components of `x`, with the
/// eigenvalue predicted after deleting all of them.
pub fn merris_alternating_principle(g: &WeightedGraph, lambda: f64, x: &[f64]) -> Result<AlternatingOutcome> {
    let tol = COMPONENT_TOL * check_eigenpair(g, lambda, x)?;
    let edges: Vec<usize> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| (x[e.u] + x[e.v]).abs() <= tol && x[e.u].abs() > tol)
        .map(|(id, _)| id)
        .collect();
    let new_lambda = match edges.split_first() {
        None => Some(lambda),
        Some((&first, rest)) => {
            let w = g.edge(first).w;
            rest.iter().all(|&id| g.edge(id).w == w).then_some(lambda - 2.0 * w)
        }
    };
    let h = g.without_edges(&edges);
    let lx = h.laplacian().matrix().mul_vec(x);
    let rayleigh = dot(x, &lx) / dot(x, x);
    let verified = new_lambda.is_some_and(|l| residual(&h, l, x) <= residual_tol(&h, x));
    Ok(AlternatingOutcome {
        edges,
        new_lambda,
        rayleigh,
        verified,
    })
}
