//! Serializable results of each subcommand. Field names are part of the
//! `--json` contract; the matching schemas live in `schemas/`.

use metacut_core::exhaustive::{ExhaustiveResult, Objective, PartitionReport};
use metacut_core::heuristic::{side_fiedler, BisectResult, Bisection};
use metacut_core::spectral::{lambda2_bounds, Bound};
use metacut_core::stability::{
    bound_verdict, merris_alternating_principle, merris_edge_principle, necessary_avg_weight,
    network_stability_check_with_tau, BoundVerdict, RemovalVerdict,
};
use metacut_core::{fiedler, CutSetVector, LocalDynamics, Result, WeightedGraph};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TauSource {
    Flag,
    Document,
    Dynamics,
}

/// Where the threshold came from, and for derived thresholds the patch
/// attaining the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauInfo {
    pub value: f64,
    pub source: TauSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub patch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeRef {
    pub id: usize,
    pub label: String,
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

impl EdgeRef {
    pub fn new(g: &WeightedGraph, id: usize) -> Self {
        let e = g.edge(id);
        Self {
            id,
            label: format!("e{}", id + 1),
            u: e.u,
            v: e.v,
            w: e.w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundJson {
    pub name: &'static str,
    pub value: f64,
    pub applicable: bool,
}

impl From<&Bound> for BoundJson {
    fn from(b: &Bound) -> Self {
        Self {
            name: b.name,
            value: b.value,
            applicable: b.applicable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsJson {
    pub lower: Vec<BoundJson>,
    pub upper: Vec<BoundJson>,
    pub unweighted_exact: bool,
    pub screen: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AverageWeightCheck {
    pub mean_degree: f64,
    pub required: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyzeReport {
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    pub lambda2: f64,
    pub tau: TauInfo,
    pub condition1_ok: bool,
    pub failing_patches: Vec<usize>,
    pub condition2_ok: bool,
    pub marginal: bool,
    pub stable: bool,
    /// Absent for disconnected or single-node graphs.
    pub bounds: Option<BoundsJson>,
    /// Absent below three nodes.
    pub average_weight: Option<AverageWeightCheck>,
}

pub fn screen_name(v: BoundVerdict) -> &'static str {
    match v {
        BoundVerdict::Unstable => "unstable",
        BoundVerdict::Stable => "stable",
        BoundVerdict::Indeterminate => "indeterminate",
    }
}

impl AnalyzeReport {
    pub fn build(g: &WeightedGraph, dynamics: &LocalDynamics, tau: TauInfo) -> Result<Self> {
        let v = network_stability_check_with_tau(g, dynamics, tau.value)?;
        let bounds = if g.node_count() >= 2 && g.is_connected() {
            let b = lambda2_bounds(g, None)?;
            Some(BoundsJson {
                lower: b.lower.iter().map(BoundJson::from).collect(),
                upper: b.upper.iter().map(BoundJson::from).collect(),
                unweighted_exact: b.unweighted_exact,
                screen: screen_name(bound_verdict(g, tau.value)?),
            })
        } else {
            None
        };
        let n = g.node_count();
        let average_weight = if n >= 3 {
            Some(AverageWeightCheck {
                mean_degree: g.degrees().iter().sum::<f64>() / n as f64,
                required: (n as f64 - 1.0) / n as f64 * tau.value,
                ok: necessary_avg_weight(g, tau.value)?,
            })
        } else {
            None
        };
        Ok(Self {
            n,
            m: g.edge_count(),
            connected: g.is_connected(),
            lambda2: v.lambda2,
            tau,
            condition1_ok: v.condition1_ok,
            failing_patches: v.failing_patches,
            condition2_ok: v.condition2_ok,
            marginal: v.marginal,
            stable: v.stable,
            bounds,
            average_weight,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentJson {
    pub nodes: Vec<usize>,
    pub lambda2: f64,
    pub tau: f64,
    pub stable: bool,
    pub marginal: bool,
    pub screen: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionJson {
    pub cutset: String,
    pub edges: Vec<EdgeRef>,
    pub cut_weight: f64,
    pub min_lambda2: f64,
    pub admissible: bool,
    pub components: Vec<ComponentJson>,
}

impl PartitionJson {
    pub fn new(g: &WeightedGraph, r: &PartitionReport) -> Self {
        Self {
            cutset: r.cutset.to_string(),
            edges: r.cutset.edge_ids().into_iter().map(|id| EdgeRef::new(g, id)).collect(),
            cut_weight: r.cut_weight,
            min_lambda2: r.min_fiedler(),
            admissible: r.admissible,
            components: r
                .components
                .iter()
                .zip(&r.verdicts)
                .map(|(c, v)| ComponentJson {
                    nodes: c.nodes.clone(),
                    lambda2: c.lambda2,
                    tau: v.tau,
                    stable: v.stable,
                    marginal: v.marginal,
                    screen: screen_name(c.screen),
                })
                .collect(),
        }
    }
}

pub fn objective_name(o: Objective) -> &'static str {
    match o {
        Objective::MinWeight => "min_weight",
        Objective::MaxWeight => "max_weight",
        Objective::MaxMinFiedler => "max_min_fiedler",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExhaustiveReport {
    pub enumerated: usize,
    pub survivors: usize,
    pub admissible: usize,
    pub objective: &'static str,
    /// `null` when each component derives its own threshold.
    pub tau: Option<f64>,
    /// Admissible partitions, best first.
    pub partitions: Vec<PartitionJson>,
}

impl ExhaustiveReport {
    pub fn new(g: &WeightedGraph, res: &ExhaustiveResult, objective: Objective, tau: Option<f64>) -> Self {
        let ranked = metacut_core::exhaustive::rank_cutsets(&res.reports, objective);
        Self {
            enumerated: res.enumerated,
            survivors: res.reports.len(),
            admissible: ranked.len(),
            objective: objective_name(objective),
            tau,
            partitions: ranked.into_iter().map(|r| PartitionJson::new(g, r)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BestBisection {
    pub trial: usize,
    pub k: usize,
    pub theta: f64,
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub partition: PartitionJson,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBaseline {
    pub c1: Vec<usize>,
    pub c2: Vec<usize>,
    pub lambda2_c1: f64,
    pub lambda2_c2: f64,
    /// Smaller side `lambda_2`; feasibility is not required.
    pub theta: f64,
    pub cut_weight: f64,
}

impl SpectralBaseline {
    pub fn new(g: &WeightedGraph, b: &Bisection) -> Result<Self> {
        let (l1, l2) = side_fiedler(g, b)?;
        Ok(Self {
            c1: b.c1(),
            c2: b.c2(),
            lambda2_c1: l1,
            lambda2_c2: l2,
            theta: l1.min(l2),
            cut_weight: metacut_core::cutspace::cut_weight(g, &b.cut_vector(g)),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BisectReport {
    pub tau: f64,
    pub trials: usize,
    pub seed: u64,
    pub feasible_trials: usize,
    pub best: Option<BestBisection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub baseline: Option<SpectralBaseline>,
}

impl BisectReport {
    pub fn new(g: &WeightedGraph, res: &BisectResult, seed: u64, baseline: Option<SpectralBaseline>) -> Self {
        let best = res.best.zip(res.report.as_ref()).map(|(i, report)| {
            let o = res.trials[i].outcome.as_ref().expect("best trial is feasible");
            BestBisection {
                trial: i,
                k: o.k,
                theta: o.theta,
                c1: o.bisection.c1(),
                c2: o.bisection.c2(),
                partition: PartitionJson::new(g, report),
            }
        });
        Self {
            tau: res.tau,
            trials: res.trials.len(),
            seed,
            feasible_trials: res.trials.iter().filter(|t| t.outcome.is_some()).count(),
            best,
            baseline,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovalCheck {
    /// `safe`, `unsafe` or `not_applicable`.
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub lambdas: Vec<f64>,
    pub updated: Vec<f64>,
    pub untouched_min: Option<f64>,
    pub lambda2_after: Option<f64>,
}

impl From<&RemovalVerdict> for RemovalCheck {
    fn from(v: &RemovalVerdict) -> Self {
        let verdict = match v {
            RemovalVerdict::Safe(_) => "safe",
            RemovalVerdict::Unsafe(_) => "unsafe",
            RemovalVerdict::NotApplicable { .. } => "not_applicable",
        };
        let reason = match v {
            RemovalVerdict::NotApplicable { i, j, reason } => Some(format!("edge {i}-{j}: {reason}")),
            _ => None,
        };
        let d = v.detail();
        Self {
            verdict,
            reason,
            lambdas: d.map(|d| d.lambdas.clone()).unwrap_or_default(),
            updated: d.map(|d| d.updated.clone()).unwrap_or_default(),
            untouched_min: d.and_then(|d| d.untouched_min),
            lambda2_after: d.and_then(|d| d.lambda2_after()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectCheck {
    pub lambda2_after: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCandidateJson {
    #[serde(flatten)]
    pub edge: EdgeRef,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlternatingJson {
    pub edges: Vec<EdgeRef>,
    pub new_lambda: Option<f64>,
    pub rayleigh: f64,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MerrisJson {
    pub lambda: f64,
    pub vector: Vec<f64>,
    /// Edges whose deletion leaves the Fiedler pair unchanged.
    pub edge_principle: Vec<EdgeCandidateJson>,
    pub alternating: AlternatingJson,
}

impl MerrisJson {
    pub fn build(g: &WeightedGraph) -> Result<Self> {
        let f = fiedler(g)?;
        let edge_principle = merris_edge_principle(g, f.value, &f.vector)?
            .into_iter()
            .map(|c| EdgeCandidateJson {
                edge: EdgeRef::new(g, c.edge),
                verified: c.verified,
            })
            .collect();
        let alt = merris_alternating_principle(g, f.value, &f.vector)?;
        Ok(Self {
            lambda: f.value,
            vector: f.vector,
            edge_principle,
            alternating: AlternatingJson {
                edges: alt.edges.iter().map(|&id| EdgeRef::new(g, id)).collect(),
                new_lambda: alt.new_lambda,
                rayleigh: alt.rayleigh,
                verified: alt.verified,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeCheckReport {
    pub tau: f64,
    pub lambda2: f64,
    pub removed: Vec<EdgeRef>,
    pub eigenvector_test: RemovalCheck,
    pub direct: DirectCheck,
    /// Absent when the graph is disconnected or has fewer than two nodes.
    pub merris: Option<MerrisJson>,
}

/// Cut vector marking `ids`.
pub fn cut_of(g: &WeightedGraph, ids: &[usize]) -> CutSetVector {
    CutSetVector::from_edge_ids(g.edge_count(), ids)
}
