//! Balanced bisection improved by greedy pair swaps, restarted from random
//! initial splits.
//!
//! Each trial starts from a random balanced split `C1 | C2`, builds a swap
//! sequence by repeatedly taking the highest-gain node of each side, and keeps
//! the swap prefix whose smaller component `lambda_2` is largest while both
//! components stay at or above `tau`.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::cutspace::CutSetVector;
use crate::error::{Error, Result};
use crate::exhaustive::{evaluate_cutset, PartitionConfig, PartitionReport};
use crate::graph::WeightedGraph;
use crate::spectral::{algebraic_connectivity, fiedler};
use crate::stability::{self, LocalDynamics};

/// Increment of the splitmix64 sequence.
const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    C1,
    C2,
}

/// Two-way split with side sizes differing by at most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bisection {
    in_c2: Vec<bool>,
}

impl Bisection {
    /// `true` marks a node of `C2`.
    pub fn from_sides(in_c2: Vec<bool>) -> Result<Self> {
        let c2 = in_c2.iter().filter(|&&b| b).count();
        let c1 = in_c2.len() - c2;
        if c1.abs_diff(c2) > 1 {
            return Err(Error::Unbalanced(c1, c2));
        }
        Ok(Self { in_c2 })
    }

    /// `C1` is `c1`, every other node of `0..n` is in `C2`.
    pub fn from_c1(n: usize, c1: &[usize]) -> Result<Self> {
        let mut in_c2 = vec![true; n];
        for &x in c1 {
            if x >= n {
                return Err(Error::IdOutOfRange { id: x, n });
            }
            if !in_c2[x] {
                return Err(Error::InvalidParameter("node listed twice"));
            }
            in_c2[x] = false;
        }
        Self::from_sides(in_c2)
    }

    pub fn len(&self) -> usize {
        self.in_c2.len()
    }

    pub fn is_empty(&self) -> bool {
        self.in_c2.is_empty()
    }

    pub fn side(&self, x: usize) -> Side {
        if self.in_c2[x] {
            Side::C2
        } else {
            Side::C1
        }
    }

    pub fn c1(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| !self.in_c2[x]).collect()
    }

    pub fn c2(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.in_c2[x]).collect()
    }

    /// Exchanges the sides of `a` and `b`, which must be on opposite sides.
    pub fn swap(&mut self, a: usize, b: usize) {
        debug_assert_ne!(self.in_c2[a], self.in_c2[b]);
        self.in_c2.swap(a, b);
    }

    /// Edges joining the two sides.
    pub fn cut_vector(&self, g: &WeightedGraph) -> CutSetVector {
        let mut c = CutSetVector::zeros(g.edge_count());
        for (id, e) in g.edges().iter().enumerate() {
            if self.in_c2[e.u] != self.in_c2[e.v] {
                c.set(id, true);
            }
        }
        c
    }
}

/// `E_x - I_x` for every node: weight to the other side minus weight within its own.
pub fn gains(g: &WeightedGraph, b: &Bisection) -> Vec<f64> {
    gains_among(g, b, &vec![true; g.node_count()])
}

fn gains_among(g: &WeightedGraph, b: &Bisection, active: &[bool]) -> Vec<f64> {
    (0..g.node_count())
        .map(|x| {
            g.incident(x)
                .iter()
                .map(|&id| g.edge(id))
                .filter(|e| active[e.other(x)])
                .map(|e| if b.in_c2[e.other(x)] != b.in_c2[x] { e.w } else { -e.w })
                .sum()
        })
        .collect()
}

/// Greedy pairs `(a_k, b_k)`, `a_k` from `C1` and `b_k` from `C2`. After
/// each pick both nodes leave the pool and gains are recomputed among the
/// remaining nodes. Ties go to the lowest id.
pub fn swap_sequence(g: &WeightedGraph, b: &Bisection) -> Vec<(usize, usize)> {
    let n = g.node_count();
    let mut active = vec![true; n];
    let mut pairs = Vec::new();
    loop {
        let gain = gains_among(g, b, &active);
        let best = |side: bool| {
            (0..n)
                .filter(|&x| active[x] && b.in_c2[x] == side)
                .fold(None, |acc: Option<usize>, x| match acc {
                    Some(y) if gain[y] >= gain[x] => Some(y),
                    _ => Some(x),
                })
        };
        match (best(false), best(true)) {
            (Some(a), Some(c)) => {
                active[a] = false;
                active[c] = false;
                pairs.push((a, c));
            }
            _ => return pairs,
        }
    }
}

/// `lambda_2` of the subgraph induced by each side.
pub fn side_fiedler(g: &WeightedGraph, b: &Bisection) -> Result<(f64, f64)> {
    let l1 = algebraic_connectivity(&g.induced(&b.c1()).graph)?;
    let l2 = algebraic_connectivity(&g.induced(&b.c2()).graph)?;
    Ok((l1, l2))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwapPlan {
    pub pairs: Vec<(usize, usize)>,
    /// Side `lambda_2` values after swapping the first `k` pairs, for each
    /// candidate `k` starting at 0.
    pub prefix_fiedler: Vec<(f64, f64)>,
    pub k: usize,
    /// The smaller side `lambda_2` at the chosen `k`.
    pub theta: f64,
}

impl SwapPlan {
    /// The starting bisection with the chosen prefix applied.
    pub fn apply(&self, b: &Bisection) -> Bisection {
        let mut out = b.clone();
        for &(a, c) in &self.pairs[..self.k] {
            out.swap(a, c);
        }
        out
    }
}

/// Picks the prefix length `k < n/2` (0 allowed) maximising the smaller
/// side `lambda_2` subject to both sides reaching `tau`. Ties go to the
/// smallest `k`.
pub fn choose_k(g: &WeightedGraph, b: &Bisection, pairs: &[(usize, usize)], tau: f64) -> Result<SwapPlan> {
    let n = g.node_count();
    let k_max = pairs.len().min(n.div_ceil(2).saturating_sub(1));
    let mut current = b.clone();
    let mut prefix_fiedler = Vec::with_capacity(k_max + 1);
    let mut best: Option<(usize, f64)> = None;
    let floor = tau - stability::MARGINAL_TOL * tau.abs().max(1.0);
    for k in 0..=k_max {
        if k > 0 {
            let (a, c) = pairs[k - 1];
            current.swap(a, c);
        }
        let (l1, l2) = side_fiedler(g, &current)?;
        prefix_fiedler.push((l1, l2));
        let theta = l1.min(l2);
        if theta >= floor && best.is_none_or(|(_, t)| theta > t) {
            best = Some((k, theta));
        }
    }
    let (k, theta) = best.ok_or(Error::NoFeasibleK)?;
    Ok(SwapPlan {
        pairs: pairs.to_vec(),
        prefix_fiedler,
        k,
        theta,
    })
}

/// Random generator for trial `trial` of a run seeded with `seed`: seeded
/// with output number `trial` of the splitmix64 stream started at `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> SplitMix64 {
    let mut head = SplitMix64::seed_from_u64(seed.wrapping_add(trial.wrapping_mul(GOLDEN_GAMMA)));
    SplitMix64::seed_from_u64(head.next_u64())
}

/// Uniformly random balanced split; `C1` receives `ceil(n/2)` nodes.
pub fn random_bisection<R: RngCore>(n: usize, rng: &mut R) -> Bisection {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut in_c2 = vec![false; n];
    for &x in &order[n.div_ceil(2)..] {
        in_c2[x] = true;
    }
    Bisection { in_c2 }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub k: usize,
    pub theta: f64,
    pub bisection: Bisection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSummary {
    pub trial: usize,
    pub initial: Bisection,
    /// `None` when no prefix keeps both sides at or above `tau`.
    pub outcome: Option<TrialOutcome>,
}

/// One restart: random split, swap sequence, prefix choice.
pub fn run_trial(g: &WeightedGraph, tau: f64, seed: u64, trial: usize) -> Result<TrialSummary> {
    let initial = random_bisection(g.node_count(), &mut trial_rng(seed, trial as u64));
    let pairs = swap_sequence(g, &initial);
    let outcome = match choose_k(g, &initial, &pairs, tau) {
        Ok(plan) => Some(TrialOutcome {
            k: plan.k,
            theta: plan.theta,
            bisection: plan.apply(&initial),
        }),
        Err(Error::NoFeasibleK) => None,
        Err(e) => return Err(e),
    };
    Ok(TrialSummary {
        trial,
        initial,
        outcome,
    })
}

/// Index of the feasible trial with the largest `theta`, lowest index on ties.
pub fn select_best(trials: &[TrialSummary]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, t) in trials.iter().enumerate() {
        if let Some(o) = &t.outcome {
            if best.is_none_or(|(_, th)| o.theta > th) {
                best = Some((i, o.theta));
            }
        }
    }
    best.map(|(i, _)| i)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BisectResult {
    pub tau: f64,
    pub trials: Vec<TrialSummary>,
    /// Index into `trials`.
    pub best: Option<usize>,
    /// Full report of the best bisection.
    pub report: Option<PartitionReport>,
}

impl BisectResult {
    pub fn best_outcome(&self) -> Option<&TrialOutcome> {
        self.best.and_then(|i| self.trials[i].outcome.as_ref())
    }
}

/// `trials` restarts with `tau` taken from all patches.
pub fn multi_restart_bisect(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    trials: usize,
    seed: u64,
) -> Result<BisectResult> {
    let t = stability::tau(dynamics)?.tau;
    multi_restart_bisect_with_tau(g, dynamics, t, trials, seed)
}

pub fn multi_restart_bisect_with_tau(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    tau: f64,
    trials: usize,
    seed: u64,
) -> Result<BisectResult> {
    check_bisect_input(g, trials)?;
    let summaries = (0..trials)
        .map(|t| run_trial(g, tau, seed, t))
        .collect::<Result<Vec<_>>>()?;
    finish_bisect(g, dynamics, tau, summaries)
}

/// Validates the arguments shared by the sequential and parallel drivers.
pub fn check_bisect_input(g: &WeightedGraph, trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1"));
    }
    if g.node_count() < 2 {
        return Err(Error::TooSmall {
            needed: 2,
            got: g.node_count(),
        });
    }
    Ok(())
}

/// Picks the best trial and builds its report.
pub fn finish_bisect(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    tau: f64,
    trials: Vec<TrialSummary>,
) -> Result<BisectResult> {
    let best = select_best(&trials);
    let report = match best.and_then(|i| trials[i].outcome.as_ref()) {
        Some(o) => Some(bisection_report(g, dynamics, &o.bisection, tau)?),
        None => None,
    };
    Ok(BisectResult {
        tau,
        trials,
        best,
        report,
    })
}

/// Partition report for the cut between the two sides, judged against a
/// single threshold.
pub fn bisection_report(
    g: &WeightedGraph,
    dynamics: &LocalDynamics,
    b: &Bisection,
    tau: f64,
) -> Result<PartitionReport> {
    let config = PartitionConfig {
        tau: Some(tau),
        ..PartitionConfig::default()
    };
    evaluate_cutset(g, dynamics, &b.cut_vector(g), &config)
}

/// Median split of the Fiedler vector: the `ceil(n/2)` nodes with the
/// smallest components (ties by id) form `C1`.
pub fn spectral_bisect(g: &WeightedGraph) -> Result<Bisection> {
    let f = fiedler(g)?;
    if !f.connected {
        return Err(Error::GraphDisconnected);
    }
    let mut order: Vec<usize> = (0..g.node_count()).collect();
    order.sort_by(|&a, &b| f.vector[a].total_cmp(&f.vector[b]).then(a.cmp(&b)));
    let half = g.node_count().div_ceil(2);
    Bisection::from_c1(g.node_count(), &order[..half])
}
