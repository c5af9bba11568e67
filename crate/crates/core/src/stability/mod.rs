//! Stability of diffusion-coupled predator-prey patches.
//!
//! Each patch `i` carries the Jacobian `J_i` of its reaction terms at the
//! coexistence equilibrium. Linearising the coupled system mode by mode
//! over the Laplacian eigenpairs `(lambda_j, phi_j)` gives, for every
//! non-uniform mode `j > 1`, the characteristic equation
//!
//! ```text
//! sigma^2 - sigma (tr J_i - 2 lambda_j) + (lambda_j^2 - lambda_j tr J_i + det J_i) = 0
//! ```
//!
//! whose roots have non-positive real part when
//!
//! 1. `(tr J_i)^2 - 4 det J_i <= 0` for every patch, and
//! 2. `lambda_2 >= tau = max_i tr J_i / 2`.
//!
//! The uniform mode `j = 1` (`lambda_1 = 0`) is not affected by diffusion and
//! evolves under `J_i` itself; see [`crate::dynamics`] for the transverse
//! formulation used to check these conditions numerically.

mod merris;
mod removal;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Component, WeightedGraph};
use crate::spectral::{self, lambda2_bounds};

pub use self::merris::{merris_alternating_principle, merris_edge_principle, AlternatingOutcome, EdgeCandidate};
pub use self::removal::{safe_rank_r_removal, safe_single_edge_removal, RemovalDetail, RemovalVerdict};

/// `lambda_2` within this (relative) distance of `tau` is reported as marginal.
pub const MARGINAL_TOL: f64 = 1e-9;

/// Jacobian of a patch's reaction terms:
/// `[[df/dx, df/dy], [dg/dx, dg/dy]]` at the coexistence equilibrium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian2(pub [[f64; 2]; 2]);

impl Jacobian2 {
    pub fn new(dfdx: f64, dfdy: f64, dgdx: f64, dgdy: f64) -> Self {
        Self([[dfdx, dfdy], [dgdx, dgdy]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> f64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// `(tr J)^2 - 4 det J`; non-positive iff the eigenvalues are complex (or repeated).
    pub fn discriminant(&self) -> f64 {
        let t = self.trace();
        t * t - 4.0 * self.det()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

/// One Jacobian per patch, indexed by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalDynamics {
    jacobians: Vec<Jacobian2>,
}

impl LocalDynamics {
    pub fn new(jacobians: Vec<Jacobian2>) -> Result<Self> {
        if jacobians.iter().any(|j| !j.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Jacobian entry"));
        }
        Ok(Self { jacobians })
    }

    /// The same Jacobian on every one of `n` patches.
    pub fn uniform(n: usize, j: Jacobian2) -> Result<Self> {
        Self::new(alloc::vec![j; n])
    }

    pub fn len(&self) -> usize {
        self.jacobians.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jacobians.is_empty()
    }

    pub fn jacobians(&self) -> &[Jacobian2] {
        &self.jacobians
    }

    pub fn get(&self, node: usize) -> &Jacobian2 {
        &self.jacobians[node]
    }

    pub fn is_uniform(&self) -> bool {
        self.jacobians.windows(2).all(|w| w[0] == w[1])
    }

    /// Dynamics restricted to `nodes` (in that order).
    pub fn select(&self, nodes: &[usize]) -> Result<Self> {
        let mut out = Vec::with_capacity(nodes.len());
        for &x in nodes {
            let j = self.jacobians.get(x).ok_or(Error::DimensionMismatch {
                expected: self.len(),
                got: x + 1,
            })?;
            out.push(*j);
        }
        Ok(Self { jacobians: out })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.len(),
            });
        }
        Ok(())
    }
}

/// `tau = max_i tr J_i / 2` and the patch attaining it (lowest id on ties).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityThreshold {
    pub tau: f64,
    pub argmax_patch: usize,
}

pub fn tau(dynamics: &LocalDynamics) -> Result<StabilityThreshold> {
    let mut best: Option<StabilityThreshold> = None;
    for (i, j) in dynamics.jacobians().iter().enumerate() {
        let t = 0.5 * j.trace();
        if best.is_none_or(|b| t > b.tau) {
            best = Some(StabilityThreshold {
                tau: t,
                argmax_patch: i,
            });
        }
    }
    best.ok_or(Error::Empty)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstabilityKind {
    /// `tr J > 0`.
    UnstableType1,
    /// `tr J < 0` and `det J < 0`.
    UnstableType2,
    NotUnstable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchInstability {
    pub kind: InstabilityKind,
    /// Type 1 with complex eigenvalues: the only isolated-patch instability
    /// that diffusion coupling can remove.
    pub diffusion_stabilizable: bool,
}

/// Classifies an isolated patch by the Dulac-Bendixson instability tests.
pub fn patch_instability_check(j: &Jacobian2) -> PatchInstability {
    let (tr, det) = (j.trace(), j.det());
    let kind = if tr > 0.0 {
        InstabilityKind::UnstableType1
    } else if tr < 0.0 && det < 0.0 {
        InstabilityKind::UnstableType2
    } else {
        InstabilityKind::NotUnstable
    };
    PatchInstability {
        kind,
        diffusion_stabilizable: kind == InstabilityKind::UnstableType1 && j.discriminant() <= 0.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    /// Every patch has `(tr J)^2 - 4 det J <= 0`.
    pub condition1_ok: bool,
    /// `lambda_2 >= tau`.
    pub condition2_ok: bool,
    /// `lambda_2` and `tau` coincide within [`MARGINAL_TOL`].
    pub marginal: bool,
    pub lambda2: f64,
    pub tau: f64,
    /// Node ids (in the caller's numbering) violating condition 1.
    pub failing_patches: Vec<usize>,
}

pub(crate) fn verdict(lambda2: f64, tau: f64, jacobians: &[Jacobian2], ids: &[usize]) -> StabilityVerdict {
    let failing_patches: Vec<usize> = jacobians
        .iter()
        .zip(ids)
        .filter(|(j, _)| j.discriminant() > 0.0)
        .map(|(_, &id)| id)
        .collect();
    let tol = MARGINAL_TOL * tau.abs().max(1.0);
    let condition1_ok = failing_patches.is_empty();
    let condition2_ok = lambda2 >= tau - tol;
    StabilityVerdict {
        stable: condition1_ok && condition2_ok,
        condition1_ok,
        condition2_ok,
        marginal: (lambda2 - tau).abs() <= tol,
        lambda2,
        tau,
        failing_patches,
    }
}

/// Both stability conditions for the whole network, with `tau` from all patches.
/// A disconnected graph has `lambda_2 = 0`.
pub fn network_stability_check(g: &WeightedGraph, dynamics: &LocalDynamics) -> Result<StabilityVerdict> {
    let threshold = tau(dynamics)?;
    network_stability_check_with_tau(g, dynamics, threshold.tau)
}

/// As [`network_stability_check`] with an explicit threshold.
pub fn network_stability_check_with_tau(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    tau: f64,
) -> Result<StabilityVerdict> {
    dynamics.check_len(g.node_count())?;
    let lambda2 = spectral::algebraic_connectivity(g)?;
    let ids: Vec<usize> = (0..g.node_count()).collect();
    Ok(verdict(lambda2, tau, dynamics.jacobians(), &ids))
}

/// Per-component verdicts. `dynamics` is indexed by the parent graph's node
/// ids. With `tau = None` each component's threshold is recomputed from its
/// own patches; `Some(t)` applies `t` everywhere.
pub fn component_stability(
    components: &[Component],
    dynamics: &LocalDynamics,
    tau: Option<f64>,
) -> Result<Vec<StabilityVerdict>> {
    components
        .iter()
        .map(|c| {
            if c.len() < 2 {
                return Err(Error::SingletonComponent(c.len()));
            }
            let local = dynamics.select(&c.nodes)?;
            let t = match tau {
                Some(t) => t,
                None => self::tau(&local)?.tau,
            };
            let lambda2 = spectral::algebraic_connectivity(&c.graph)?;
            Ok(verdict(lambda2, t, local.jacobians(), &c.nodes))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundVerdict {
    /// `tau` exceeds an upper bound on `lambda_2`.
    Unstable,
    /// `tau` is below a lower bound on `lambda_2`.
    Stable,
    Indeterminate,
}

/// Decides condition 2 from bounds alone when they are conclusive.
///
/// Upper bounds hold for any positive weights. Lower bounds are used only
/// on unit-weight graphs, where they are exact statements.
pub fn bound_verdict(component: &WeightedGraph, tau: f64) -> Result<BoundVerdict> {
    let bounds = lambda2_bounds(component, None)?;
    if bounds.best_upper().is_some_and(|u| tau > u) {
        return Ok(BoundVerdict::Unstable);
    }
    if bounds.unweighted_exact && bounds.best_lower().is_some_and(|l| tau < l) {
        return Ok(BoundVerdict::Stable);
    }
    Ok(BoundVerdict::Indeterminate)
}

/// Necessary condition on a subgraph to be stable: the mean weighted degree
/// `sum_i d_i / n` must reach `(n - 1) / n * tau`. `false` proves instability;
/// `true` is inconclusive.
pub fn necessary_avg_weight(g: &WeightedGraph, tau: f64) -> Result<bool> {
    let n = g.node_count();
    if n < 3 {
        return Err(Error::TooSmall { needed: 3, got: n });
    }
    let nf = n as f64;
    let mean_degree = g.degrees().iter().sum::<f64>() / nf;
    Ok(mean_degree >= (nf - 1.0) / nf * tau)
}
