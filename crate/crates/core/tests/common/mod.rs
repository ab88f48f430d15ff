//! Brute-force reference implementations used as test oracles. None of
//! these share code with the library beyond `Graph` accessors.
#![allow(dead_code)]

use std::collections::BTreeMap;

use paradox_lens_core::{Graph, NodeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi graph on `n` nodes with edge probability `p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u as NodeId, v as NodeId));
            }
        }
    }
    Graph::from_edges(n, edges).0
}

pub fn random_regular_ring(n: usize, half_degree: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for d in 1..=half_degree {
            edges.push((u as NodeId, ((u + d) % n) as NodeId));
        }
    }
    Graph::from_edges(n, edges).0
}

/// Median neighbor degree by full sort, as an exact half-integer `2·median`.
pub fn twice_median_neighbor_degree(g: &Graph, v: usize) -> Option<usize> {
    let mut d: Vec<usize> = g.neighbors(v).iter().map(|&u| g.degree(u as usize)).collect();
    if d.is_empty() {
        return None;
    }
    d.sort_unstable();
    let n = d.len();
    Some(if n % 2 == 1 { 2 * d[n / 2] } else { d[n / 2 - 1] + d[n / 2] })
}

/// `(nodes in paradox, non-isolated nodes)` under the median definition.
pub fn brute_median_paradox(g: &Graph) -> (u64, u64) {
    let mut hit = 0;
    let mut total = 0;
    for v in 0..g.node_count() {
        if let Some(m2) = twice_median_neighbor_degree(g, v) {
            total += 1;
            hit += (m2 > 2 * g.degree(v)) as u64;
        }
    }
    (hit, total)
}

/// Per-class brute-force wedge statistics.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct WedgeTally {
    pub nodes: u64,
    /// Neighbor incidences with larger degree.
    pub larger: u64,
    pub incidences: u64,
    /// Unordered neighbor pairs with both neighbors larger.
    pub both_larger: u64,
    pub pairs: u64,
}

/// Enumerates every wedge `(i, v, j)` explicitly.
pub fn wedge_enumeration(g: &Graph) -> BTreeMap<usize, WedgeTally> {
    let mut out: BTreeMap<usize, WedgeTally> = BTreeMap::new();
    for v in 0..g.node_count() {
        let k = g.degree(v);
        if k == 0 {
            continue;
        }
        let t = out.entry(k).or_default();
        t.nodes += 1;
        let nb = g.neighbors(v);
        for &i in nb {
            t.incidences += 1;
            t.larger += (g.degree(i as usize) > k) as u64;
        }
        for a in 0..nb.len() {
            for b in a + 1..nb.len() {
                t.pairs += 1;
                let both = g.degree(nb[a] as usize) > k && g.degree(nb[b] as usize) > k;
                t.both_larger += both as u64;
            }
        }
    }
    out
}

/// `Q_> = P(k' > k)` over uniformly random ordered edge endpoints.
pub fn brute_q_exceed(g: &Graph) -> f64 {
    let mut hit = 0u64;
    let mut total = 0u64;
    for v in 0..g.node_count() {
        for &u in g.neighbors(v) {
            total += 1;
            hit += (g.degree(u as usize) > g.degree(v)) as u64;
        }
    }
    hit as f64 / total as f64
}

/// Pearson correlation of endpoint degrees over ordered edge endpoints.
pub fn brute_assortativity(g: &Graph) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for v in 0..g.node_count() {
        for &u in g.neighbors(v) {
            xs.push(g.degree(v) as f64);
            ys.push(g.degree(u as usize) as f64);
        }
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}
