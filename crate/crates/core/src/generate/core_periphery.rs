//! Three-tier core-periphery fixture.
//!
//! A clique of core nodes, a middle tier with degrees in
//! `mid_degree_min..=mid_degree_max`, and leaves. Each mid node is
//! core-facing with probability `β(k)` and leaf-facing otherwise; each of its
//! stubs then goes to its preferred side with probability `purity`. Mid
//! nodes of one degree thus split into two groups with high and low `x̄`,
//! which correlates the exceedance indicators of their neighbor pairs.

use rand::seq::{index, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::rng_for;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorePeripheryWiring {
    pub mid_degree_min: usize,
    pub mid_degree_max: usize,
    /// `β` at `mid_degree_min`; interpolated linearly up to `beta_high`.
    pub beta_low: f64,
    /// `β` at `mid_degree_max`.
    pub beta_high: f64,
    pub purity: f64,
}

impl Default for CorePeripheryWiring {
    fn default() -> Self {
        CorePeripheryWiring {
            mid_degree_min: 6,
            mid_degree_max: 20,
            beta_low: 0.8,
            beta_high: 0.2,
            purity: 0.9,
        }
    }
}

impl CorePeripheryWiring {
    /// Same `β` for every mid degree.
    pub fn uniform(beta: f64) -> Self {
        CorePeripheryWiring {
            beta_low: beta,
            beta_high: beta,
            ..Default::default()
        }
    }

    pub fn beta(&self, k: usize) -> f64 {
        if self.mid_degree_max == self.mid_degree_min {
            return self.beta_low;
        }
        let t = (k - self.mid_degree_min) as f64 / (self.mid_degree_max - self.mid_degree_min) as f64;
        self.beta_low + t * (self.beta_high - self.beta_low)
    }

    fn validate(&self) -> Result<()> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if self.mid_degree_min < 2 || self.mid_degree_min > self.mid_degree_max {
            return Err(Error::InvalidParameter(format!(
                "mid degree range {}..={} must satisfy 2 <= min <= max",
                self.mid_degree_min, self.mid_degree_max
            )));
        }
        if !(unit(self.beta_low) && unit(self.beta_high) && unit(self.purity)) {
            return Err(Error::InvalidParameter("beta and purity must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Node ids: core `0..n_core`, mid `n_core..n_core + n_mid`, then leaves.
pub fn generate_core_periphery(
    n_core: usize,
    n_mid: usize,
    n_leaf: usize,
    wiring: &CorePeripheryWiring,
    seed: u64,
) -> Result<Graph> {
    wiring.validate()?;
    if n_core == 0 || n_mid == 0 || n_leaf == 0 {
        return Err(Error::InvalidParameter("every tier needs at least one node".into()));
    }
    if wiring.mid_degree_max > n_core.min(n_leaf) {
        return Err(Error::InfeasibleWiring(format!(
            "mid degree {} exceeds the smaller of {n_core} core and {n_leaf} leaf nodes",
            wiring.mid_degree_max
        )));
    }
    let mut rng = rng_for(seed, 2);
    let mut edges: Vec<(NodeId, NodeId)> = Vec::new();
    for a in 0..n_core {
        for b in a + 1..n_core {
            edges.push((a as NodeId, b as NodeId));
        }
    }

    let mut leaf_order: Vec<NodeId> = (0..n_leaf).map(|i| (n_core + n_mid + i) as NodeId).collect();
    leaf_order.shuffle(&mut rng);
    let mut cursor = 0usize;
    for i in 0..n_mid {
        let v = (n_core + i) as NodeId;
        let k = rng.random_range(wiring.mid_degree_min..=wiring.mid_degree_max);
        let core_facing = rng.random_bool(wiring.beta(k));
        let p_core = if core_facing { wiring.purity } else { 1.0 - wiring.purity };
        let to_core = (0..k).filter(|_| rng.random_bool(p_core)).count();
        for c in index::sample(&mut rng, n_core, to_core) {
            edges.push((v, c as NodeId));
        }
        // Consecutive slots of the cyclic leaf order are distinct because
        // k <= n_leaf, and spread leaf degrees to within one of each other.
        for _ in to_core..k {
            edges.push((v, leaf_order[cursor % n_leaf]));
            cursor += 1;
        }
    }

    let n = n_core + n_mid + n_leaf;
    let (g, cleaning) = Graph::from_edges(n, edges);
    debug_assert_eq!(cleaning.self_loops + cleaning.duplicates, 0);

    let leaf_max = (n_core + n_mid..n).map(|v| g.degree(v)).max().unwrap_or(0);
    let leaf_min = (n_core + n_mid..n).map(|v| g.degree(v)).min().unwrap_or(0);
    let core_min = (0..n_core).map(|v| g.degree(v)).min().unwrap_or(0);
    if leaf_min == 0 {
        return Err(Error::InfeasibleWiring(format!(
            "{n_leaf} leaves but only {cursor} leaf-side stubs; some leaves stay isolated"
        )));
    }
    if leaf_max >= wiring.mid_degree_min {
        return Err(Error::InfeasibleWiring(format!(
            "leaf degree {leaf_max} reaches the mid tier minimum {}",
            wiring.mid_degree_min
        )));
    }
    if core_min <= wiring.mid_degree_max {
        return Err(Error::InfeasibleWiring(format!(
            "core degree {core_min} does not exceed the mid tier maximum {}",
            wiring.mid_degree_max
        )));
    }
    Ok(g)
}
