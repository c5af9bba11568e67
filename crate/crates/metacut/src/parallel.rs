//! Rayon drivers for the embarrassingly parallel stages. Results come back
//! in the same order as the sequential versions, so output does not depend
//! on the thread count.

use metacut_core::exhaustive::{evaluate_cutset, surviving_cutsets, ExhaustiveResult, PartitionConfig};
use metacut_core::heuristic::{check_bisect_input, finish_bisect, run_trial, BisectResult};
use metacut_core::{LocalDynamics, Result, WeightedGraph};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

/// Worker pool with `threads` workers, or one per available core.
pub fn pool(threads: Option<usize>) -> std::result::Result<ThreadPool, ThreadPoolBuildError> {
    ThreadPoolBuilder::new().num_threads(threads.unwrap_or(0)).build()
}

/// Exhaustive partitioning with the per-cut evaluation spread over the
/// current pool.
pub fn exhaustive_partition_par(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    config: &PartitionConfig,
) -> Result<ExhaustiveResult> {
    let (enumerated, survivors) = surviving_cutsets(g, config)?;
    let reports = survivors
        .par_iter()
        .map(|c| evaluate_cutset(g, dynamics, c, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExhaustiveResult { enumerated, reports })
}

/// Multi-restart bisection with trials run in parallel.
pub fn multi_restart_bisect_par(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    tau: f64,
    trials: usize,
    seed: u64,
) -> Result<BisectResult> {
    check_bisect_input(g, trials)?;
    let summaries = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(g, tau, seed, t))
        .collect::<Result<Vec<_>>>()?;
    finish_bisect(g, dynamics, tau, summaries)
}
