//! Seeded Erdős–Rényi graphs with random positive weights.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Samples drawn before giving up on a connected graph.
pub const MAX_CONNECT_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErConfig {
    pub n: usize,
    /// Independent inclusion probability of each unordered pair.
    pub p: f64,
    pub w_min: f64,
    pub w_max: f64,
    /// Draw whole-number weights uniformly from `ceil(w_min)..=floor(w_max)`.
    pub integer_weights: bool,
    pub require_connected: bool,
}

impl ErConfig {
    pub fn new(n: usize, p: f64) -> Self {
        Self {
            n,
            p,
            w_min: 1.0,
            w_max: 20.0,
            integer_weights: true,
            require_connected: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::BadProbability(self.p));
        }
        let bad = Error::BadWeightRange {
            min: self.w_min,
            max: self.w_max,
        };
        if !(self.w_min.is_finite() && self.w_max.is_finite() && self.w_min > 0.0 && self.w_min <= self.w_max) {
            return Err(bad);
        }
        if self.integer_weights && self.w_min.ceil() > self.w_max.floor() {
            return Err(bad);
        }
        Ok(())
    }
}

/// `G(n, p)` with weights from the configured range, reproducible from `seed`.
/// With `require_connected`, samples are redrawn from the same stream until
/// one is connected.
pub fn generate_er(config: &ErConfig, seed: u64) -> Result<WeightedGraph> {
    config.validate()?;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let attempts = if config.require_connected {
        MAX_CONNECT_ATTEMPTS
    } else {
        1
    };
    for _ in 0..attempts {
        let g = sample(config, &mut rng);
        if !config.require_connected || g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::CannotConnect(MAX_CONNECT_ATTEMPTS))
}

fn sample<R: Rng>(config: &ErConfig, rng: &mut R) -> WeightedGraph {
    let n = config.n;
    let (lo, hi) = (config.w_min.ceil() as u64, config.w_max.floor() as u64);
    let mut triples = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() >= config.p {
                continue;
            }
            let w = if config.integer_weights {
                rng.random_range(lo..=hi) as f64
            } else {
                rng.random_range(config.w_min..=config.w_max)
            };
            triples.push((u, v, w));
        }
    }
    WeightedGraph::from_edge_list(n, &triples).expect("sampled pairs are distinct and weights positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_when_p_is_one() {
        let g = generate_er(&ErConfig::new(7, 1.0), 3).unwrap();
        assert_eq!(g.edge_count(), 21);
    }

    #[test]
    fn cannot_connect_empty() {
        assert_eq!(
            generate_er(&ErConfig::new(3, 0.0), 0),
            Err(Error::CannotConnect(MAX_CONNECT_ATTEMPTS))
        );
        let cfg = ErConfig {
            require_connected: false,
            ..ErConfig::new(3, 0.0)
        };
        assert_eq!(generate_er(&cfg, 0).unwrap().edge_count(), 0);
    }

    #[test]
    fn er25_edge_count_and_weights() {
        let cfg = ErConfig::new(25, 0.5);
        let g = generate_er(&cfg, 2024).unwrap();
        // 300 pairs at p = 1/2: mean 150, sigma ~8.66
        assert!((124..=176).contains(&g.edge_count()), "{}", g.edge_count());
        assert!(g
            .edges()
            .iter()
            .all(|e| e.w.fract() == 0.0 && (1.0..=20.0).contains(&e.w)));
        assert_eq!(g, generate_er(&cfg, 2024).unwrap());
        assert_ne!(g, generate_er(&cfg, 2025).unwrap());
    }

    #[test]
    fn continuous_weights_in_range() {
        let cfg = ErConfig {
            w_min: 0.5,
            w_max: 1.5,
            integer_weights: false,
            ..ErConfig::new(10, 0.6)
        };
        let g = generate_er(&cfg, 1).unwrap();
        assert!(g.edges().iter().all(|e| (0.5..=1.5).contains(&e.w)));
    }

    #[test]
    fn bad_inputs() {
        assert_eq!(generate_er(&ErConfig::new(3, 1.5), 0), Err(Error::BadProbability(1.5)));
        let cfg = ErConfig {
            w_min: 2.0,
            w_max: 1.0,
            ..ErConfig::new(3, 0.5)
        };
        assert!(matches!(generate_er(&cfg, 0), Err(Error::BadWeightRange { .. })));
        let cfg = ErConfig {
            w_min: 1.2,
            w_max: 1.8,
            ..ErConfig::new(3, 0.5)
        };
        assert!(matches!(generate_er(&cfg, 0), Err(Error::BadWeightRange { .. })));
    }
}
