//! Bivariate log-normal joint degree model.
//!
//! Endpoint log-degrees `(log k, log k')` are jointly normal with common mean
//! `m`, common standard deviation `s`, and correlation `c`. Assortativity and
//! `μ_x(k)` have closed forms. For the global paradox the continuous law is
//! discretized onto integer degrees by evaluating the density at the centre
//! of each unit cell `[k − 1/2, k + 1/2)`, for `k = 1..=k_max`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::degree::{assortativity_from_cells, JointDegreeDistribution};
use crate::error::{Error, Result};
use crate::model::{gauss_2k, normal_sf};

/// Largest discretized mass allowed beyond `k_max`.
pub const MAX_TRUNCATED_MASS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogNormalParams {
    pub m: f64,
    pub s: f64,
    pub c: f64,
}

impl LogNormalParams {
    pub fn new(m: f64, s: f64, c: f64) -> Result<Self> {
        if !m.is_finite() {
            return Err(Error::InvalidParameter(format!("m = {m} must be finite")));
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidParameter(format!("s = {s} must be positive")));
        }
        if !(c > -1.0 && c < 1.0) {
            return Err(Error::InvalidParameter(format!("c = {c} must lie in (-1, 1)")));
        }
        Ok(LogNormalParams { m, s, c })
    }

    /// `r = (e^{c s²} − 1) / (e^{s²} − 1)`.
    pub fn assortativity(&self) -> f64 {
        let s2 = self.s * self.s;
        (self.c * s2).exp_m1() / s2.exp_m1()
    }

    /// `μ_x(k) = 1 − Φ(((log k − m)/s) √((1 − c)/(1 + c)))` for real `k > 0`.
    pub fn mu_x(&self, k: f64) -> f64 {
        let z = (k.ln() - self.m) / self.s * ((1.0 - self.c) / (1.0 + self.c)).sqrt();
        normal_sf(z)
    }

    /// Gaussian 2K paradox probability at the closed-form `μ_x(k)`, with the
    /// exact `f(1) = μ_x(1)` for a single neighbor.
    pub fn f(&self, k: usize) -> f64 {
        let mu = self.mu_x(k as f64);
        if k == 1 {
            mu
        } else {
            gauss_2k(k, mu)
        }
    }

    /// Mass of the continuous endpoint marginal beyond `k_max + 1/2`. The
    /// node distribution `p ∝ q/k` has a lighter tail, so this bounds both.
    pub fn truncated_mass(&self, k_max: usize) -> f64 {
        normal_sf(((k_max as f64 + 0.5).ln() - self.m) / self.s)
    }

    pub fn check_support(&self, k_max: usize) -> Result<()> {
        let truncated_mass = self.truncated_mass(k_max);
        if truncated_mass >= MAX_TRUNCATED_MASS {
            return Err(Error::InsufficientSupport {
                k_max,
                truncated_mass,
                limit: MAX_TRUNCATED_MASS,
            });
        }
        Ok(())
    }

    pub fn discretize(&self, k_max: usize) -> DiscreteLogNormal {
        DiscreteLogNormal::new(*self, k_max)
    }
}

/// Unnormalized midpoint-rule cell weights of the bivariate log-normal on
/// `1..=k_max` squared.
#[derive(Debug, Clone)]
pub struct DiscreteLogNormal {
    params: LogNormalParams,
    k_max: usize,
    /// Standardized log-degree `(log k − m)/s`, indexed by `k − 1`.
    z: Vec<f64>,
}

impl DiscreteLogNormal {
    fn new(params: LogNormalParams, k_max: usize) -> Self {
        let z = (1..=k_max)
            .map(|k| ((k as f64).ln() - params.m) / params.s)
            .collect();
        DiscreteLogNormal { params, k_max, z }
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    /// Density of `(k, k')` up to a constant factor.
    pub fn weight(&self, k: usize, k2: usize) -> f64 {
        let (u, v) = (self.z[k - 1], self.z[k2 - 1]);
        let c = self.params.c;
        (-(u * u - 2.0 * c * u * v + v * v) / (2.0 * (1.0 - c * c))).exp() / (k as f64 * k2 as f64)
    }

    fn row_sum(&self, k: usize) -> f64 {
        (1..=self.k_max).map(|k2| self.weight(k, k2)).sum()
    }

    /// Unnormalized row sums (indexed by `k − 1`) and their total.
    pub fn row_weights(&self) -> (Vec<f64>, f64) {
        // Rows in parallel, each summed sequentially, then a sequential
        // total: the result does not depend on the thread count.
        let rows: Vec<f64> = (1..=self.k_max).into_par_iter().map(|k| self.row_sum(k)).collect();
        let total = rows.iter().sum();
        (rows, total)
    }

    /// Normalized endpoint distribution `q(k)`, indexed by `k − 1`.
    pub fn endpoint_distribution(&self) -> Vec<f64> {
        let (rows, total) = self.row_weights();
        rows.into_iter().map(|w| w / total).collect()
    }

    /// Node degree distribution `p(k) ∝ q(k)/k`.
    pub fn node_distribution(&self) -> BTreeMap<usize, f64> {
        let q: BTreeMap<usize, f64> = self
            .endpoint_distribution()
            .into_iter()
            .enumerate()
            .map(|(i, w)| (i + 1, w))
            .collect();
        crate::degree::node_distribution_from_q(&q)
    }

    /// Assortativity of the discretized matrix, streamed cell by cell.
    pub fn assortativity(&self) -> f64 {
        let cells = (1..=self.k_max).flat_map(move |k| (1..=self.k_max).map(move |k2| (k, k2, self.weight(k, k2))));
        assortativity_from_cells(cells)
    }

    /// Joint distribution restricted to `classes`, renormalized.
    pub fn joint_on(&self, classes: &[usize]) -> Result<JointDegreeDistribution> {
        let mut cells = Vec::with_capacity(classes.len() * classes.len());
        for &k in classes {
            for &k2 in classes {
                cells.push(((k, k2), self.weight(k, k2)));
            }
        }
        JointDegreeDistribution::from_weights(cells)
    }

    pub fn joint(&self) -> Result<JointDegreeDistribution> {
        let all: Vec<usize> = (1..=self.k_max).collect();
        self.joint_on(&all)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub c: f64,
    pub r: f64,
    pub p_paradox: f64,
}

/// Global paradox `Σ_k p(k) f(k)` for one parameter set, with `p` taken from
/// the discretized joint distribution.
pub fn global_paradox(params: &LogNormalParams, k_max: usize) -> Result<f64> {
    params.check_support(k_max)?;
    let p = params.discretize(k_max).node_distribution();
    Ok(p.iter().map(|(&k, &w)| w * params.f(k)).sum())
}

pub fn sweep_global_paradox(m: f64, s: f64, c_grid: &[f64], k_max: usize) -> Result<Vec<SweepPoint>> {
    c_grid
        .iter()
        .map(|&c| {
            let params = LogNormalParams::new(m, s, c)?;
            Ok(SweepPoint {
                c,
                r: params.assortativity(),
                p_paradox: global_paradox(&params, k_max)?,
            })
        })
        .collect()
}

/// Integer-degree span over which `f` falls from `hi` to `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionWidth {
    /// Last degree with `f ≥ hi`; 1 when `f(1)` is already below `hi`.
    pub upper: usize,
    /// First degree with `f ≤ lo`.
    pub lower: usize,
    /// `f(1) < hi`, so the transition started before the support.
    pub starts_below_hi: bool,
}

impl TransitionWidth {
    pub fn width(&self) -> usize {
        self.lower.saturating_sub(self.upper)
    }
}

pub fn transition_width(params: &LogNormalParams, k_max: usize, hi: f64, lo: f64) -> Result<TransitionWidth> {
    let f: Vec<f64> = (1..=k_max).map(|k| params.f(k)).collect();
    let lower = f
        .iter()
        .position(|&v| v <= lo)
        .map(|i| i + 1)
        .ok_or_else(|| Error::InvalidParameter(format!("f never falls to {lo} below k_max = {k_max}")))?;
    let upper = f[..lower].iter().rposition(|&v| v >= hi).map(|i| i + 1);
    Ok(TransitionWidth {
        upper: upper.unwrap_or(1),
        lower,
        starts_below_hi: upper.is_none(),
    })
}
