//! 3K structure through wedge-conditional exceedance statistics.
//!
//! For a node `v` of degree `k`, let `n_>(v)` be the number of neighbors with
//! degree strictly greater than `k`. Every pair statistic needed here follows
//! from per-node counts: among the `C(k, 2)` neighbor pairs of `v`, exactly
//! `C(n_>(v), 2)` have both neighbors above `k`. That keeps the cost at
//! `O(E)` instead of enumerating `Σ_v deg(v)²` wedges.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// `n_>(v)` for every node.
pub fn larger_neighbor_counts(g: &Graph) -> Vec<u32> {
    (0..g.node_count())
        .into_par_iter()
        .map(|v| {
            let k = g.degree(v);
            g.neighbors(v)
                .iter()
                .filter(|&&u| g.degree(u as usize) > k)
                .count() as u32
        })
        .collect()
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Integer accumulators for one degree class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub degree: usize,
    pub nodes: u64,
    /// Σ n_>(v)
    pub larger: u64,
    /// Σ n_>(v)²
    pub larger_sq: u64,
    /// Σ C(n_>(v), 2)
    pub larger_pairs: u64,
}

impl ClassCounts {
    /// Neighbor incidences, `k · N_k`.
    pub fn incidences(&self) -> u64 {
        self.degree as u64 * self.nodes
    }

    /// Unordered neighbor pairs, `N_k · C(k, 2)`.
    pub fn pairs(&self) -> u64 {
        self.nodes * choose2(self.degree as u64)
    }

    pub fn mu(&self) -> f64 {
        self.larger as f64 / self.incidences() as f64
    }

    /// `P(k'_i > k, k'_j > k | k)`; `None` for classes without neighbor pairs.
    pub fn pair_exceed(&self) -> Option<f64> {
        let pairs = self.pairs();
        (pairs > 0).then(|| self.larger_pairs as f64 / pairs as f64)
    }

    /// Population variance of `x̄ = n_> / k` over the class.
    pub fn xbar_variance(&self) -> f64 {
        let k = self.degree as f64;
        let mu = self.mu();
        self.larger_sq as f64 / (self.nodes as f64 * k * k) - mu * mu
    }

    fn add(&mut self, larger: u64) {
        self.nodes += 1;
        self.larger += larger;
        self.larger_sq += larger * larger;
        self.larger_pairs += choose2(larger);
    }

    fn merge(&mut self, other: &ClassCounts) {
        self.nodes += other.nodes;
        self.larger += other.larger;
        self.larger_sq += other.larger_sq;
        self.larger_pairs += other.larger_pairs;
    }
}

/// Per-class counts for every degree `k ≥ 1`.
pub fn class_counts(g: &Graph) -> BTreeMap<usize, ClassCounts> {
    class_counts_from(g, &larger_neighbor_counts(g))
}

pub(crate) fn class_counts_from(g: &Graph, larger: &[u32]) -> BTreeMap<usize, ClassCounts> {
    let mut classes: BTreeMap<usize, ClassCounts> = BTreeMap::new();
    for (v, &n) in larger.iter().enumerate() {
        let k = g.degree(v);
        if k == 0 {
            continue;
        }
        classes
            .entry(k)
            .or_insert(ClassCounts {
                degree: k,
                ..Default::default()
            })
            .add(n as u64);
    }
    classes
}

/// `P(k'_i > k, k'_j > k | k)` for each degree class `k ≥ 2`.
pub fn pair_exceed_prob(g: &Graph) -> Result<BTreeMap<usize, f64>> {
    let out: BTreeMap<_, _> = class_counts(g)
        .into_values()
        .filter_map(|c| c.pair_exceed().map(|p| (c.degree, p)))
        .collect();
    if out.is_empty() {
        return Err(Error::NoEligibleNodes(2));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExceedanceClass {
    pub degree: usize,
    pub mu: f64,
    /// `Cov(x_i, x_j | k)`; undefined for `k = 1`.
    pub cov: Option<f64>,
    /// `ρ_x(k)`; undefined with fewer than two pairs or `μ ∈ {0, 1}`.
    pub rho: Option<f64>,
    pub nodes: u64,
    pub pairs: u64,
    pub counts: ClassCounts,
}

impl ExceedanceClass {
    pub fn from_counts(c: ClassCounts) -> Self {
        let mu = c.mu();
        let cov = c.pair_exceed().map(|p| p - mu * mu);
        let rho = match cov {
            Some(cov) if c.pairs() >= 2 && mu > 0.0 && mu < 1.0 => Some(cov / (mu * (1.0 - mu))),
            _ => None,
        };
        ExceedanceClass {
            degree: c.degree,
            mu,
            cov,
            rho,
            nodes: c.nodes,
            pairs: c.pairs(),
            counts: c,
        }
    }
}

/// Per-degree `μ_x(k)`, `Cov(x_i, x_j | k)` and `ρ_x(k)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExceedanceProfile {
    pub classes: BTreeMap<usize, ExceedanceClass>,
}

impl ExceedanceProfile {
    pub fn from_class_counts(counts: &BTreeMap<usize, ClassCounts>) -> Self {
        ExceedanceProfile {
            classes: counts
                .iter()
                .map(|(&k, &c)| (k, ExceedanceClass::from_counts(c)))
                .collect(),
        }
    }

    pub fn mu(&self) -> BTreeMap<usize, f64> {
        self.classes.iter().map(|(&k, c)| (k, c.mu)).collect()
    }

    /// Covariances for classes where they are defined (`k ≥ 2`).
    pub fn cov(&self) -> BTreeMap<usize, f64> {
        self.classes
            .iter()
            .filter_map(|(&k, c)| c.cov.map(|v| (k, v)))
            .collect()
    }

    pub fn rho(&self) -> BTreeMap<usize, f64> {
        self.classes
            .iter()
            .filter_map(|(&k, c)| c.rho.map(|v| (k, v)))
            .collect()
    }

    /// Display-only smoothing: degree classes grouped into geometric bins
    /// (`bins_per_decade` per factor of ten), with a group closed only once
    /// it holds at least `min_nodes` nodes. A short tail joins the previous
    /// group.
    pub fn log_binned(&self, bins_per_decade: u32, min_nodes: u64) -> Vec<SmoothedClass> {
        let bin_of = |k: usize| ((k as f64).log10() * bins_per_decade as f64).floor() as i64;
        let mut groups: Vec<Vec<&ExceedanceClass>> = Vec::new();
        let mut current: Vec<&ExceedanceClass> = Vec::new();
        let mut current_nodes = 0u64;
        for class in self.classes.values() {
            if let Some(last) = current.last() {
                if bin_of(class.degree) != bin_of(last.degree) && current_nodes >= min_nodes {
                    groups.push(std::mem::take(&mut current));
                    current_nodes = 0;
                }
            }
            current_nodes += class.nodes;
            current.push(class);
        }
        if !current.is_empty() {
            match groups.last_mut() {
                Some(prev) if current_nodes < min_nodes => prev.extend(current),
                _ => groups.push(current),
            }
        }
        groups.into_iter().map(SmoothedClass::pool).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothedClass {
    pub k_min: usize,
    pub k_max: usize,
    /// Node-weighted mean degree of the group.
    pub k_mean: f64,
    /// Incidence-weighted `μ_x`.
    pub mu: f64,
    /// Pair-weighted covariance over the classes where it is defined.
    pub cov: Option<f64>,
    /// Pair-weighted `ρ_x` over the classes where it is defined.
    pub rho: Option<f64>,
    pub nodes: u64,
    pub pairs: u64,
}

impl SmoothedClass {
    fn pool(classes: Vec<&ExceedanceClass>) -> Self {
        let mut pooled = ClassCounts::default();
        let mut degree_sum = 0u64;
        let (mut cov_num, mut cov_w, mut rho_num, mut rho_w) = (0.0, 0u64, 0.0, 0u64);
        for c in &classes {
            pooled.merge(&c.counts);
            degree_sum += c.counts.incidences();
            if let Some(v) = c.cov {
                cov_num += v * c.pairs as f64;
                cov_w += c.pairs;
            }
            if let Some(v) = c.rho {
                rho_num += v * c.pairs as f64;
                rho_w += c.pairs;
            }
        }
        SmoothedClass {
            k_min: classes.first().map_or(0, |c| c.degree),
            k_max: classes.last().map_or(0, |c| c.degree),
            k_mean: degree_sum as f64 / pooled.nodes as f64,
            mu: pooled.larger as f64 / degree_sum as f64,
            cov: (cov_w > 0).then(|| cov_num / cov_w as f64),
            rho: (rho_w > 0).then(|| rho_num / rho_w as f64),
            nodes: pooled.nodes,
            pairs: classes.iter().map(|c| c.pairs).sum(),
        }
    }
}

pub fn exceedance_profile(g: &Graph) -> Result<ExceedanceProfile> {
    let counts = class_counts(g);
    if counts.is_empty() {
        return Err(Error::NoEligibleNodes(1));
    }
    Ok(ExceedanceProfile::from_class_counts(&counts))
}

/// Histogram of `x̄ = n_> / k` over the nodes of one degree class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XbarDistribution {
    pub degree: usize,
    /// `counts[i]` nodes have `x̄ = i / degree`.
    pub counts: Vec<u64>,
}

impl XbarDistribution {
    pub fn iter(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        let k = self.degree as f64;
        self.counts.iter().enumerate().map(move |(i, &c)| (i as f64 / k, c))
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

pub fn xbar_distribution(g: &Graph, k: usize) -> Result<XbarDistribution> {
    xbar_distribution_from(g, &larger_neighbor_counts(g), k)
}

pub(crate) fn xbar_distribution_from(g: &Graph, larger: &[u32], k: usize) -> Result<XbarDistribution> {
    if k == 0 {
        return Err(Error::NoSuchDegreeClass(0));
    }
    let mut counts = vec![0u64; k + 1];
    let mut any = false;
    for (v, &n) in larger.iter().enumerate() {
        if g.degree(v) == k {
            counts[n as usize] += 1;
            any = true;
        }
    }
    if !any {
        return Err(Error::NoSuchDegreeClass(k));
    }
    Ok(XbarDistribution { degree: k, counts })
}
