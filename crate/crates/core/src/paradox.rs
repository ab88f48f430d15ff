//! Observed strong friendship paradox and the profile type shared with the
//! model predictors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::degree::DegreeStats;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// When a node counts as experiencing the paradox.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum ParadoxDefinition {
    /// Median neighbor degree strictly above the node's degree. For even
    /// degree the median is the mean of the two central values.
    #[default]
    MedianStrict,
    /// Strictly more than half of the neighbors have larger degree.
    XbarMajority,
}

impl ParadoxDefinition {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParadoxDefinition::MedianStrict => "median-strict",
            ParadoxDefinition::XbarMajority => "xbar-majority",
        }
    }
}

impl fmt::Display for ParadoxDefinition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParadoxDefinition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "median-strict" => Ok(ParadoxDefinition::MedianStrict),
            "xbar-majority" => Ok(ParadoxDefinition::XbarMajority),
            other => Err(Error::InvalidParameter(format!("unknown paradox definition {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParadoxSource {
    Observed,
    #[serde(rename = "model-2k-binomial")]
    Model2kBinomial,
    #[serde(rename = "model-2k-gauss")]
    Model2kGauss,
    #[serde(rename = "model-3k")]
    Model3k,
}

impl ParadoxSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParadoxSource::Observed => "observed",
            ParadoxSource::Model2kBinomial => "model-2k-binomial",
            ParadoxSource::Model2kGauss => "model-2k-gauss",
            ParadoxSource::Model3k => "model-3k",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParadoxClass {
    pub degree: usize,
    pub f: f64,
    /// `p(k)` used for the global weighting.
    pub weight: f64,
    /// Observed profiles only.
    pub nodes: Option<u64>,
    pub in_paradox: Option<u64>,
    /// 3K model only: the variance was clamped to its floor.
    pub variance_clamped: bool,
}

/// Per-degree paradox probabilities `f(k)` and their global average.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParadoxProfile {
    pub classes: BTreeMap<usize, ParadoxClass>,
    /// `Σ_k p(k) f(k)`.
    pub global_p: f64,
    pub k_c: usize,
    pub definition: ParadoxDefinition,
    pub source: ParadoxSource,
    /// Degree-0 nodes left out of both `f` and the global denominator.
    pub excluded_isolated: u64,
}

impl ParadoxProfile {
    pub fn f(&self) -> BTreeMap<usize, f64> {
        self.classes.iter().map(|(&k, c)| (k, c.f)).collect()
    }

    pub fn p(&self) -> BTreeMap<usize, f64> {
        self.classes.iter().map(|(&k, c)| (k, c.weight)).collect()
    }

    pub fn clamped_classes(&self) -> Vec<usize> {
        self.classes
            .values()
            .filter(|c| c.variance_clamped)
            .map(|c| c.degree)
            .collect()
    }

    /// Exact observed global fraction as `(nodes in paradox, non-isolated nodes)`.
    pub fn observed_ratio(&self) -> Option<(u64, u64)> {
        let mut num = 0;
        let mut den = 0;
        for c in self.classes.values() {
            num += c.in_paradox?;
            den += c.nodes?;
        }
        Some((num, den))
    }
}

/// Whether node `v` experiences the paradox. `None` for isolated nodes.
pub fn node_in_paradox(g: &Graph, v: usize, definition: ParadoxDefinition, buf: &mut Vec<usize>) -> Option<bool> {
    let k = g.degree(v);
    if k == 0 {
        return None;
    }
    let verdict = match definition {
        ParadoxDefinition::XbarMajority => {
            let larger = g
                .neighbors(v)
                .iter()
                .filter(|&&u| g.degree(u as usize) > k)
                .count();
            2 * larger > k
        }
        ParadoxDefinition::MedianStrict => {
            buf.clear();
            buf.extend(g.neighbors(v).iter().map(|&u| g.degree(u as usize)));
            let mid = k / 2;
            let (lower, &mut upper, _) = buf.select_nth_unstable(mid);
            if k % 2 == 1 {
                upper > k
            } else {
                let lower = *lower.iter().max().expect("even k >= 2");
                lower + upper > 2 * k
            }
        }
    };
    Some(verdict)
}

pub fn observed_paradox(g: &Graph, definition: ParadoxDefinition) -> Result<ParadoxProfile> {
    let verdicts: Vec<Option<bool>> = (0..g.node_count())
        .into_par_iter()
        .map_init(Vec::new, |buf, v| node_in_paradox(g, v, definition, buf))
        .collect();

    let mut tally: BTreeMap<usize, (u64, u64)> = BTreeMap::new();
    let mut isolated = 0u64;
    for (v, verdict) in verdicts.into_iter().enumerate() {
        match verdict {
            None => isolated += 1,
            Some(hit) => {
                let entry = tally.entry(g.degree(v)).or_insert((0, 0));
                entry.0 += 1;
                entry.1 += hit as u64;
            }
        }
    }
    if tally.is_empty() {
        return Err(Error::NoEligibleNodes(1));
    }

    let total: u64 = tally.values().map(|t| t.0).sum();
    let hits: u64 = tally.values().map(|t| t.1).sum();
    let classes = tally
        .iter()
        .map(|(&k, &(nodes, hit))| {
            (
                k,
                ParadoxClass {
                    degree: k,
                    f: hit as f64 / nodes as f64,
                    weight: nodes as f64 / total as f64,
                    nodes: Some(nodes),
                    in_paradox: Some(hit),
                    variance_clamped: false,
                },
            )
        })
        .collect();
    let by_degree: BTreeMap<usize, u64> = tally.iter().map(|(&k, t)| (k, t.0)).collect();
    Ok(ParadoxProfile {
        classes,
        global_p: hits as f64 / total as f64,
        k_c: critical_degree_from_counts(&by_degree),
        definition,
        source: ParadoxSource::Observed,
        excluded_isolated: isolated,
    })
}

/// `k_c = Median(q)`: the smallest degree at which the cumulative endpoint
/// distribution reaches one half.
pub fn critical_degree(stats: &DegreeStats) -> usize {
    critical_degree_from_counts(&stats.nodes_by_degree)
}

fn critical_degree_from_counts(nodes_by_degree: &BTreeMap<usize, u64>) -> usize {
    let total: u128 = nodes_by_degree.iter().map(|(&k, &c)| k as u128 * c as u128).sum();
    let mut cum = 0u128;
    for (&k, &c) in nodes_by_degree {
        cum += k as u128 * c as u128;
        if k > 0 && 2 * cum >= total {
            return k;
        }
    }
    nodes_by_degree.keys().next_back().copied().unwrap_or(0)
}

/// Median of `q(k) ∝ k p(k)` from a floating node distribution.
pub fn critical_degree_from_p(p: &BTreeMap<usize, f64>) -> usize {
    let total: f64 = p.iter().map(|(&k, &w)| k as f64 * w).sum();
    let mut cum = 0.0;
    for (&k, &w) in p {
        cum += k as f64 * w;
        if k > 0 && 2.0 * cum >= total * (1.0 - 1e-12) {
            return k;
        }
    }
    p.keys().next_back().copied().unwrap_or(0)
}

/// Smallest degree class whose `μ_x(k)` has fallen to one half or below.
/// Differs from `k_c` when `μ_x` is not monotone in `k`.
pub fn mu_half_crossing(mu: &BTreeMap<usize, f64>) -> Option<usize> {
    mu.iter().find(|(_, &m)| m <= 0.5).map(|(&k, _)| k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degree::degree_stats;
    use crate::graph::fixtures::*;

    #[test]
    fn star_five() {
        let prof = observed_paradox(&star(5), ParadoxDefinition::MedianStrict).unwrap();
        assert_eq!(prof.classes[&1].f, 1.0);
        assert_eq!(prof.classes[&4].f, 0.0);
        assert_eq!(prof.global_p, 0.8);
        assert_eq!(prof.observed_ratio(), Some((4, 5)));
        assert_eq!(prof.k_c, 1);
        assert_eq!(prof.source, ParadoxSource::Observed);
    }

    #[test]
    fn complete_graph_has_no_paradox() {
        for def in [ParadoxDefinition::MedianStrict, ParadoxDefinition::XbarMajority] {
            let prof = observed_paradox(&complete(6), def).unwrap();
            assert_eq!(prof.global_p, 0.0);
            assert_eq!(prof.k_c, 5);
        }
    }

    #[test]
    fn even_degree_tie_break() {
        // Node 0 has degree 2 with neighbors of degree 1 and 4: the median is
        // 2.5 > 2 but only one of two neighbors is larger.
        let edges = vec![(0, 1), (0, 2), (2, 3), (2, 4), (2, 5)];
        let g = Graph::from_edges(6, edges).0;
        let mut buf = Vec::new();
        assert_eq!(node_in_paradox(&g, 0, ParadoxDefinition::MedianStrict, &mut buf), Some(true));
        assert_eq!(node_in_paradox(&g, 0, ParadoxDefinition::XbarMajority, &mut buf), Some(false));
    }

    #[test]
    fn isolated_nodes_excluded() {
        let (g, _) = Graph::from_edges(4, vec![(0, 1), (0, 2)]);
        let prof = observed_paradox(&g, ParadoxDefinition::MedianStrict).unwrap();
        assert_eq!(prof.excluded_isolated, 1);
        assert_eq!(prof.observed_ratio(), Some((2, 3)));
        let (g, _) = Graph::from_edges(2, vec![(1, 1)]);
        assert!(observed_paradox(&g, ParadoxDefinition::MedianStrict).is_err());
    }

    #[test]
    fn critical_degree_conventions() {
        assert_eq!(critical_degree(&degree_stats(&star(5)).unwrap()), 1);
        assert_eq!(critical_degree(&degree_stats(&cycle(9)).unwrap()), 2);
        let p: BTreeMap<usize, f64> = [(1, 0.8), (4, 0.2)].into();
        assert_eq!(critical_degree_from_p(&p), 1);
    }

    #[test]
    fn definition_round_trip() {
        for def in [ParadoxDefinition::MedianStrict, ParadoxDefinition::XbarMajority] {
            assert_eq!(def.as_str().parse::<ParadoxDefinition>().unwrap(), def);
        }
        assert!("median".parse::<ParadoxDefinition>().is_err());
    }

    #[test]
    fn mu_crossing() {
        let mu: BTreeMap<usize, f64> = [(1, 0.9), (2, 0.6), (3, 0.5), (4, 0.7)].into();
        assert_eq!(mu_half_crossing(&mu), Some(3));
    }
}
