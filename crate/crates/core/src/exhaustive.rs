//! Exhaustive partitioning: enumerate the whole cut space, drop cuts that
//! strand a patch, and keep the cuts whose components are all stable.

use alloc::vec::Vec;

use crate::cutspace::{apply_cutset, cut_weight, enumerate_cutsets_capped, CutSetVector, DEFAULT_RANK_CAP};
use crate::error::Result;
use crate::graph::{Component, WeightedGraph};
use crate::spectral::algebraic_connectivity;
use crate::stability::{bound_verdict, tau, verdict, BoundVerdict, LocalDynamics, StabilityVerdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionConfig {
    /// Fixed threshold for every component; `None` derives it from each
    /// component's own patches.
    pub tau: Option<f64>,
    pub rank_cap: usize,
    /// Cuts leaving a component smaller than this are discarded before any
    /// spectral work. The default of 2 rejects cuts that isolate a node.
    pub min_component_size: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        Self {
            tau: None,
            rank_cap: DEFAULT_RANK_CAP,
            min_component_size: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentReport {
    /// Original node ids, ascending.
    pub nodes: Vec<usize>,
    pub lambda2: f64,
    /// What the cheap bounds alone said about condition 2.
    pub screen: BoundVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub cutset: CutSetVector,
    pub cut_weight: f64,
    pub components: Vec<ComponentReport>,
    /// One verdict per component, same order.
    pub verdicts: Vec<StabilityVerdict>,
    /// No singleton component and every verdict stable.
    pub admissible: bool,
}

impl PartitionReport {
    /// Smallest component `lambda_2`.
    pub fn min_fiedler(&self) -> f64 {
        self.components.iter().map(|c| c.lambda2).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveResult {
    /// Size of the enumerated cut space, `2^(n-1) - 1`.
    pub enumerated: usize,
    /// Reports for the cuts passing the size filter, in enumeration order.
    pub reports: Vec<PartitionReport>,
}

impl ExhaustiveResult {
    pub fn admissible(&self) -> impl Iterator<Item = &PartitionReport> {
        self.reports.iter().filter(|r| r.admissible)
    }
}

/// Enumerates the cut space and applies the size filter. Returns the
/// enumerated count and the surviving vectors in enumeration order.
pub fn surviving_cutsets(g: &WeightedGraph, config: &PartitionConfig) -> Result<(usize, Vec<CutSetVector>)> {
    let all = enumerate_cutsets_capped(g, config.rank_cap)?;
    let count = all.len();
    let keep = all
        .into_iter()
        .filter(|c| passes_size_filter(g, c, config.min_component_size))
        .collect();
    Ok((count, keep))
}

fn passes_size_filter(g: &WeightedGraph, c: &CutSetVector, min_size: usize) -> bool {
    match min_size {
        0 | 1 => true,
        2 => !crate::cutspace::has_isolated_node(g, c),
        k => {
            let (label, count) = g.component_labels_without(|id| c.get(id));
            let mut sizes = alloc::vec![0usize; count];
            label.iter().for_each(|&l| sizes[l] += 1);
            sizes.iter().all(|&s| s >= k)
        }
    }
}

/// Splits `g` along `c` and checks every resulting component.
pub fn evaluate_cutset(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    c: &CutSetVector,
    config: &PartitionConfig,
) -> Result<PartitionReport> {
    let parts = apply_cutset(g, c);
    let mut components = Vec::with_capacity(parts.len());
    let mut verdicts = Vec::with_capacity(parts.len());
    for part in &parts {
        let (report, v) = evaluate_component(part, dynamics, config.tau)?;
        components.push(report);
        verdicts.push(v);
    }
    let admissible = parts.iter().all(|p| p.len() >= 2) && verdicts.iter().all(|v| v.stable);
    Ok(PartitionReport {
        cutset: c.clone(),
        cut_weight: cut_weight(g, c),
        components,
        verdicts,
        admissible,
    })
}

fn evaluate_component(
    part: &Component,
    dynamics: &LocalDynamics,
    fixed_tau: Option<f64>,
) -> Result<(ComponentReport, StabilityVerdict)> {
    let local = dynamics.select(&part.nodes)?;
    let t = match fixed_tau {
        Some(t) => t,
        None => tau(&local)?.tau,
    };
    let screen = if part.len() >= 2 {
        bound_verdict(&part.graph, t)?
    } else {
        BoundVerdict::Indeterminate
    };
    let lambda2 = algebraic_connectivity(&part.graph)?;
    let v = verdict(lambda2, t, local.jacobians(), &part.nodes);
    debug_assert!(screen != BoundVerdict::Unstable || !v.condition2_ok);
    Ok((
        ComponentReport {
            nodes: part.nodes.clone(),
            lambda2,
            screen,
        },
        v,
    ))
}

/// The full pipeline with default settings.
pub fn exhaustive_partition(g: &WeightedGraph, dynamics: &LocalDynamics) -> Result<ExhaustiveResult> {
    exhaustive_partition_with(g, dynamics, &PartitionConfig::default())
}

pub fn exhaustive_partition_with(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    config: &PartitionConfig,
) -> Result<ExhaustiveResult> {
    let (enumerated, survivors) = surviving_cutsets(g, config)?;
    let reports = survivors
        .iter()
        .map(|c| evaluate_cutset(g, dynamics, c, config))
        .collect::<Result<_>>()?;
    Ok(ExhaustiveResult { enumerated, reports })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    MinWeight,
    MaxWeight,
    /// Largest smallest-component `lambda_2` first.
    MaxMinFiedler,
}

/// Admissible reports ordered by `objective`; ties keep input order.
pub fn rank_cutsets(reports: &[PartitionReport], objective: Objective) -> Vec<&PartitionReport> {
    let mut out: Vec<&PartitionReport> = reports.iter().filter(|r| r.admissible).collect();
    match objective {
        Objective::MinWeight => out.sort_by(|a, b| a.cut_weight.total_cmp(&b.cut_weight)),
        Objective::MaxWeight => out.sort_by(|a, b| b.cut_weight.total_cmp(&a.cut_weight)),
        Objective::MaxMinFiedler => out.sort_by(|a, b| b.min_fiedler().total_cmp(&a.min_fiedler())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::stability::Jacobian2;
    use alloc::vec;

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

    fn dyn5() -> LocalDynamics {
        LocalDynamics::uniform(5, Jacobian2::new(3.0, -5.0, 5.0, 3.0)).unwrap()
    }

    fn cut(ids: &[usize]) -> CutSetVector {
        CutSetVector::from_edge_ids(6, ids)
    }

    #[test]
    fn worked_example() {
        let r = exhaustive_partition(&g56(), &dyn5()).unwrap();
        assert_eq!(r.enumerated, 15);
        let mut got: Vec<_> = r.reports.iter().map(|p| p.cutset.clone()).collect();
        got.sort();
        // S2, S3, S2+S4, (S1+S2)+S3, (S1+S2)+S4
        let mut want = vec![
            cut(&[0, 3, 5]),
            cut(&[1, 3]),
            cut(&[0, 2, 5]),
            cut(&[1, 4, 5]),
            cut(&[2, 4, 5]),
        ];
        want.sort();
        assert_eq!(got, want);
        let mut adm: Vec<_> = r.admissible().map(|p| p.cutset.clone()).collect();
        adm.sort();
        let mut want = vec![cut(&[1, 3]), cut(&[1, 4, 5])];
        want.sort();
        assert_eq!(adm, want);
    }

    #[test]
    fn worked_example_ranking() {
        let r = exhaustive_partition(&g56(), &dyn5()).unwrap();
        let max = rank_cutsets(&r.reports, Objective::MaxWeight);
        assert_eq!(max[0].cutset, cut(&[1, 3]));
        assert_eq!(max[0].cut_weight, 7.0);
        let min = rank_cutsets(&r.reports, Objective::MinWeight);
        assert_eq!(min[0].cutset, cut(&[1, 4, 5]));
        assert_eq!(min[0].cut_weight, 5.0);
        let fied = rank_cutsets(&r.reports, Objective::MaxMinFiedler);
        assert_eq!(fied.len(), 2);
        assert!(fied[0].min_fiedler() >= fied[1].min_fiedler());
        assert!(rank_cutsets(&[], Objective::MinWeight).is_empty());
    }

    #[test]
    fn triangle_has_no_admissible_cut() {
        let k3 = families::complete(3);
        let d = LocalDynamics::uniform(3, Jacobian2::new(0.0, -1.0, 1.0, 0.0)).unwrap();
        let r = exhaustive_partition(&k3, &d).unwrap();
        assert_eq!(r.enumerated, 3);
        assert!(r.reports.is_empty());
        let cfg = PartitionConfig {
            min_component_size: 1,
            ..PartitionConfig::default()
        };
        let r = exhaustive_partition_with(&k3, &d, &cfg).unwrap();
        assert_eq!(r.reports.len(), 3);
        assert_eq!(r.admissible().count(), 0);
    }

    #[test]
    fn size_filter_levels() {
        let p6 = families::path(6);
        let d = LocalDynamics::uniform(6, Jacobian2::new(0.0, -1.0, 1.0, 0.0)).unwrap();
        let cfg = |k| PartitionConfig {
            min_component_size: k,
            ..PartitionConfig::default()
        };
        // single-edge cuts of P6 leave sizes (1,5) (2,4) (3,3) (4,2) (5,1)
        let r3 = exhaustive_partition_with(&p6, &d, &cfg(3)).unwrap();
        assert_eq!(r3.reports.len(), 1);
        let r2 = exhaustive_partition_with(&p6, &d, &cfg(2)).unwrap();
        // three-edge cut into pairs plus the three middle single cuts
        assert_eq!(r2.reports.len(), 4);
    }

    #[test]
    fn deterministic() {
        let a = exhaustive_partition(&g56(), &dyn5()).unwrap();
        let b = exhaustive_partition(&g56(), &dyn5()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn disconnected_rejected() {
        let g = WeightedGraph::from_edge_list(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let d = LocalDynamics::uniform(4, Jacobian2::new(0.0, -1.0, 1.0, 0.0)).unwrap();
        assert!(exhaustive_partition(&g, &d).is_err());
    }
}
