//! 1K and 2K structure: degree distributions, the joint degree distribution
//! of edge endpoints, assortativity, and neighbor exceedance probabilities.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Sparse joint degree distribution `e(k, k')` over ordered endpoint pairs.
///
/// Stored as a symmetric map: both `(k, k')` and `(k', k)` are present.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDegreeDistribution {
    cells: BTreeMap<(usize, usize), f64>,
}

impl JointDegreeDistribution {
    /// Validates that `cells` is symmetric and sums to one within `tolerance`.
    /// Zero-mass cells are dropped, and so is any cell with a degree of 0.
    pub fn from_cells<I>(cells: I, tolerance: f64) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let mut map = BTreeMap::new();
        for ((k, k2), w) in cells {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "e({k},{k2}) = {w} is not a nonnegative probability"
                )));
            }
            if w > 0.0 {
                if k == 0 || k2 == 0 {
                    return Err(Error::InvalidParameter(format!(
                        "e({k},{k2}) > 0 references degree 0"
                    )));
                }
                *map.entry((k, k2)).or_insert(0.0) += w;
            }
        }
        let total: f64 = map.values().sum();
        if (total - 1.0).abs() > tolerance {
            return Err(Error::InvalidParameter(format!(
                "joint degree distribution sums to {total}, not 1"
            )));
        }
        for (&(k, k2), &w) in &map {
            let mirror = map.get(&(k2, k)).copied().unwrap_or(0.0);
            if (w - mirror).abs() > tolerance {
                return Err(Error::InvalidParameter(format!(
                    "joint degree distribution is not symmetric at ({k},{k2})"
                )));
            }
        }
        Ok(JointDegreeDistribution { cells: map })
    }

    /// Normalizes nonnegative weights; the input must already be symmetric.
    pub fn from_weights<I>(weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((usize, usize), f64)>,
    {
        let cells: Vec<_> = weights.into_iter().filter(|&(_, w)| w > 0.0).collect();
        let total: f64 = cells.iter().map(|&(_, w)| w).sum();
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::InvalidParameter("joint degree weights have no mass".into()));
        }
        Self::from_cells(cells.into_iter().map(|(c, w)| (c, w / total)), 1e-9)
    }

    /// Independent-endpoint matrix `e(k, k') = q(k) q(k')`.
    pub fn product(q: &BTreeMap<usize, f64>) -> Result<Self> {
        let mut cells = Vec::with_capacity(q.len() * q.len());
        for (&k, &a) in q {
            for (&k2, &b) in q {
                cells.push(((k, k2), a * b));
            }
        }
        Self::from_weights(cells)
    }

    pub fn get(&self, k: usize, k2: usize) -> f64 {
        self.cells.get(&(k, k2)).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.cells.iter().map(|(&c, &w)| (c, w))
    }

    /// Endpoint degree distribution `q(k) = Σ_k' e(k, k')`.
    pub fn marginal(&self) -> BTreeMap<usize, f64> {
        let mut q = BTreeMap::new();
        for (&(k, _), &w) in &self.cells {
            *q.entry(k).or_insert(0.0) += w;
        }
        q
    }

    /// Node degree distribution implied by the marginal, `p(k) ∝ q(k) / k`.
    pub fn node_distribution(&self) -> BTreeMap<usize, f64> {
        node_distribution_from_q(&self.marginal())
    }

    /// `⟨k⟩ = 1 / Σ_k q(k)/k`.
    pub fn mean_degree(&self) -> f64 {
        1.0 / self.marginal().iter().map(|(&k, &w)| w / k as f64).sum::<f64>()
    }

    pub fn assortativity(&self) -> f64 {
        assortativity_from_cells(self.iter().map(|((k, k2), w)| (k, k2, w)))
    }

    /// `μ_x(k) = Σ_{k' > k} e(k, k') / q(k)`.
    pub fn mu_x(&self) -> BTreeMap<usize, f64> {
        let q = self.marginal();
        let mut above: BTreeMap<usize, f64> = q.keys().map(|&k| (k, 0.0)).collect();
        for (&(k, k2), &w) in &self.cells {
            if k2 > k {
                *above.get_mut(&k).expect("marginal covers every row") += w;
            }
        }
        above.into_iter().map(|(k, a)| (k, a / q[&k])).collect()
    }

    /// `Q_> = ⟨k⟩ Σ_k Σ_{k' > k} e(k, k') / k`.
    pub fn q_exceed_prob(&self) -> f64 {
        let sum: f64 = self
            .cells
            .iter()
            .filter(|(&(k, k2), _)| k2 > k)
            .map(|(&(k, _), &w)| w / k as f64)
            .sum();
        self.mean_degree() * sum
    }
}

pub(crate) fn node_distribution_from_q(q: &BTreeMap<usize, f64>) -> BTreeMap<usize, f64> {
    let norm: f64 = q.iter().map(|(&k, &w)| w / k as f64).sum();
    q.iter().map(|(&k, &w)| (k, w / k as f64 / norm)).collect()
}

/// Assortativity of an arbitrary (possibly unnormalized) symmetric weight
/// field over degree pairs, in one pass:
/// `r = (Σ k k' e − ⟨k⟩_q²) / (⟨k²⟩_q − ⟨k⟩_q²)`. Zero variance gives 0.
pub fn assortativity_from_cells<I>(cells: I) -> f64
where
    I: IntoIterator<Item = (usize, usize, f64)>,
{
    let (mut total, mut s1, mut s2, mut cross) = (0.0, 0.0, 0.0, 0.0);
    for (k, k2, w) in cells {
        let (a, b) = (k as f64, k2 as f64);
        total += w;
        s1 += a * w;
        s2 += a * a * w;
        cross += a * b * w;
    }
    let mean = s1 / total;
    let var = s2 / total - mean * mean;
    if var <= 0.0 {
        return 0.0;
    }
    ((cross / total - mean * mean) / var).clamp(-1.0, 1.0)
}

/// Exact 1K/2K summary of a graph.
///
/// Everything is accumulated as integer counts; floating values are derived
/// with a single division so they do not depend on how the work was split.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeStats {
    pub node_count: u64,
    pub edge_count: u64,
    /// `N_k`: number of nodes of degree `k`, including `k = 0`.
    pub nodes_by_degree: BTreeMap<usize, u64>,
    /// Ordered endpoint pair counts; sums to `2 · edge_count`.
    pub joint_counts: BTreeMap<(usize, usize), u64>,
    /// Per class, number of (degree-k node, neighbor) incidences whose
    /// neighbor has degree strictly greater than `k`.
    pub larger_counts: BTreeMap<usize, u64>,
    pub p: BTreeMap<usize, f64>,
    pub q: BTreeMap<usize, f64>,
    pub mean_degree: f64,
    pub var_q: f64,
    pub assortativity: f64,
    /// `assortativity` as an exact ratio; `(0, 0)` for zero variance.
    pub assortativity_ratio: (i128, i128),
}

type Cells = HashMap<(usize, usize), u64>;

struct Moments {
    sum_k2: i128,
    sum_k3: i128,
    cross: i128,
}

impl DegreeStats {
    pub fn from_graph(g: &Graph) -> Result<Self> {
        if g.edge_count() == 0 {
            return Err(Error::DegreeStatsUndefined);
        }
        let n = g.node_count();
        let degrees = g.degrees();

        let cells: Cells = (0..n)
            .into_par_iter()
            .fold(Cells::new, |mut acc, u| {
                let k = degrees[u];
                for &v in g.neighbors(u) {
                    *acc.entry((k, degrees[v as usize])).or_insert(0) += 1;
                }
                acc
            })
            .reduce(Cells::new, |mut a, b| {
                for (key, c) in b {
                    *a.entry(key).or_insert(0) += c;
                }
                a
            });
        let joint_counts: BTreeMap<_, _> = cells.into_iter().collect();

        let mut nodes_by_degree = BTreeMap::new();
        for &k in &degrees {
            *nodes_by_degree.entry(k).or_insert(0u64) += 1;
        }

        let mut moments = Moments {
            sum_k2: 0,
            sum_k3: 0,
            cross: 0,
        };
        for (&k, &c) in &nodes_by_degree {
            let (k, c) = (k as i128, c as i128);
            moments.sum_k2 += c * k * k;
            moments.sum_k3 += c * k * k * k;
        }
        let mut larger_counts: BTreeMap<usize, u64> = nodes_by_degree
            .keys()
            .filter(|&&k| k > 0)
            .map(|&k| (k, 0))
            .collect();
        for (&(k, k2), &c) in &joint_counts {
            moments.cross += (k as i128) * (k2 as i128) * c as i128;
            if k2 > k {
                *larger_counts.get_mut(&k).expect("row degree occurs") += c;
            }
        }

        let two_e = 2 * g.edge_count() as i128;
        let sq = moments.sum_k2 * moments.sum_k2;
        let num = two_e * moments.cross - sq;
        let den = two_e * moments.sum_k3 - sq;
        let (assortativity, assortativity_ratio) = if den == 0 {
            (0.0, (0, 0))
        } else {
            ((num as f64 / den as f64).clamp(-1.0, 1.0), (num, den))
        };
        let var_q = den as f64 / (two_e * two_e) as f64;

        let nf = n as f64;
        let two_ef = two_e as f64;
        let p = nodes_by_degree.iter().map(|(&k, &c)| (k, c as f64 / nf)).collect();
        let q = nodes_by_degree
            .iter()
            .filter(|(&k, _)| k > 0)
            .map(|(&k, &c)| (k, (k as u64 * c) as f64 / two_ef))
            .collect();

        Ok(DegreeStats {
            node_count: n as u64,
            edge_count: g.edge_count() as u64,
            nodes_by_degree,
            joint_counts,
            larger_counts,
            p,
            q,
            mean_degree: two_ef / nf,
            var_q,
            assortativity,
            assortativity_ratio,
        })
    }

    /// Floating joint distribution `e(k, k') = count / (2 · edge_count)`.
    pub fn joint(&self) -> JointDegreeDistribution {
        let total = 2.0 * self.edge_count as f64;
        JointDegreeDistribution {
            cells: self.joint_counts.iter().map(|(&c, &n)| (c, n as f64 / total)).collect(),
        }
    }

    pub fn joint_probability(&self, k: usize, k2: usize) -> f64 {
        self.joint_counts.get(&(k, k2)).copied().unwrap_or(0) as f64 / (2 * self.edge_count) as f64
    }

    /// Endpoint count behind `q(k)`: `k · N_k`.
    pub fn endpoint_count(&self, k: usize) -> u64 {
        k as u64 * self.nodes_by_degree.get(&k).copied().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.nodes_by_degree.keys().next_back().copied().unwrap_or(0)
    }
}

pub fn degree_stats(g: &Graph) -> Result<DegreeStats> {
    DegreeStats::from_graph(g)
}

/// Probability that a uniformly random node's uniformly random neighbor has
/// strictly larger degree, `⟨k⟩ Σ_k Σ_{k' > k} e(k, k') / k`. Isolated nodes
/// count towards the node population and never see a larger neighbor.
pub fn q_exceed_prob(stats: &DegreeStats) -> f64 {
    let sum: f64 = stats
        .larger_counts
        .iter()
        .map(|(&k, &c)| c as f64 / k as f64)
        .sum();
    sum / stats.node_count as f64
}

/// `μ_x(k)` for each occurring degree `k ≥ 1`.
pub fn mu_x(stats: &DegreeStats) -> BTreeMap<usize, f64> {
    stats
        .larger_counts
        .iter()
        .map(|(&k, &c)| (k, c as f64 / stats.endpoint_count(k) as f64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn star_five() {
        let s = degree_stats(&star(5)).unwrap();
        assert_eq!(s.joint_probability(1, 4), 0.5);
        assert_eq!(s.joint_probability(4, 1), 0.5);
        assert_eq!(s.q[&1], 0.5);
        assert_eq!(s.q[&4], 0.5);
        assert_eq!(s.mean_degree, 8.0 / 5.0);
        assert_eq!(s.assortativity, -1.0);
        assert_eq!(s.assortativity_ratio, (-144, 144));
        assert!((q_exceed_prob(&s) - 0.8).abs() < 1e-15);
        let mu = mu_x(&s);
        assert_eq!(mu[&1], 1.0);
        assert_eq!(mu[&4], 0.0);
    }

    #[test]
    fn path_three() {
        let s = degree_stats(&path(3)).unwrap();
        assert_eq!(s.joint_probability(1, 2), 0.5);
        assert_eq!(s.joint_probability(2, 1), 0.5);
        assert_eq!(s.assortativity, -1.0);
        assert!((q_exceed_prob(&s) - 2.0 / 3.0).abs() < 1e-15);
        let mu = mu_x(&s);
        assert_eq!((mu[&1], mu[&2]), (1.0, 0.0));
    }

    #[test]
    fn regular_graph_is_degenerate() {
        let s = degree_stats(&cycle(7)).unwrap();
        assert_eq!(s.joint_counts.len(), 1);
        assert_eq!(s.joint_probability(2, 2), 1.0);
        assert_eq!(s.assortativity, 0.0);
        assert_eq!(s.var_q, 0.0);
        assert_eq!(q_exceed_prob(&s), 0.0);
        assert_eq!(mu_x(&s)[&2], 0.0);
    }

    #[test]
    fn edgeless_graph_errors() {
        let (g, _) = Graph::from_edges(3, vec![(1, 1)]);
        let err = degree_stats(&g).unwrap_err();
        assert!(err.to_string().starts_with("degree statistics undefined"));
    }

    #[test]
    fn isolated_nodes_stay_in_p() {
        let (g, _) = Graph::from_edges(4, vec![(0, 1), (1, 2)]);
        let s = degree_stats(&g).unwrap();
        assert_eq!(s.p[&0], 0.25);
        assert!(!s.q.contains_key(&0));
        assert_eq!(s.mean_degree, 1.0);
    }

    #[test]
    fn float_route_matches_integer_route() {
        let s = degree_stats(&star(9)).unwrap();
        let e = s.joint();
        assert!((e.assortativity() - s.assortativity).abs() < 1e-12);
        assert!((e.q_exceed_prob() - q_exceed_prob(&s)).abs() < 1e-12);
        assert!((e.mean_degree() - s.mean_degree).abs() < 1e-12);
        for (k, v) in e.mu_x() {
            assert!((v - mu_x(&s)[&k]).abs() < 1e-15);
        }
    }

    #[test]
    fn product_matrix_has_zero_assortativity() {
        let q: BTreeMap<usize, f64> = [(1, 0.2), (2, 0.3), (5, 0.1), (40, 0.4)].into();
        let e = JointDegreeDistribution::product(&q).unwrap();
        assert!(e.assortativity().abs() < 1e-9);
        for (k, w) in e.marginal() {
            assert!((w - q[&k]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_matrices() {
        let asym = vec![((1, 2), 0.6), ((2, 1), 0.4)];
        assert!(JointDegreeDistribution::from_cells(asym, 1e-9).is_err());
        let unnormalized = vec![((1, 2), 0.6), ((2, 1), 0.6)];
        assert!(JointDegreeDistribution::from_cells(unnormalized, 1e-9).is_err());
        let zero_degree = vec![((0, 2), 0.5), ((2, 0), 0.5)];
        assert!(JointDegreeDistribution::from_cells(zero_degree, 1e-9).is_err());
    }
}
