//! Paradox predictors built on pairwise (2K) and wedge (3K) degree
//! correlations.
//!
//! All three predictors treat a degree-`k` node as being in the paradox when
//! strictly more than `k/2` of its exceedance indicators are one, so they
//! line up with [`ParadoxDefinition::XbarMajority`].

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::paradox::{critical_degree_from_p, ParadoxClass, ParadoxDefinition, ParadoxProfile, ParadoxSource};
use crate::triplet::exceedance_profile;

/// Relative variance floor used when a noisy covariance drives the 3K
/// variance to zero or below.
pub const VARIANCE_FLOOR: f64 = 1e-6;

/// Standard normal CDF, `Φ(z) = erfc(−z/√2) / 2`.
pub fn std_normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// `1 − Φ(z)`, evaluated without cancellation.
pub(crate) fn normal_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

fn ln_choose(n: usize, k: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0) - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0)
}

/// `P(X ≥ lo)` for `X ~ Binomial(n, mu)`.
///
/// Terms are summed outward from the mode as ratios to the modal term, and
/// only the modal term is evaluated in log space, so nothing overflows for
/// `n` in the millions. When `lo` is below the mean the complementary tail
/// is summed instead, so values near one keep full relative accuracy in
/// `1 − P`.
pub fn binomial_upper_tail(n: usize, lo: usize, mu: f64) -> f64 {
    if lo == 0 {
        return 1.0;
    }
    if lo > n || mu <= 0.0 {
        return 0.0;
    }
    if mu >= 1.0 {
        return 1.0;
    }
    if (lo as f64) < n as f64 * mu {
        // P(X ≥ lo) = 1 − P(n − X ≥ n − lo + 1), with n − X ~ Binomial(n, 1 − mu).
        return 1.0 - binomial_upper_tail(n, n - lo + 1, 1.0 - mu);
    }
    let odds = mu / (1.0 - mu);
    let mode = (((n + 1) as f64 * mu).floor() as usize).clamp(lo, n);
    let mut sum = 1.0;
    let mut term = 1.0;
    for i in mode..n {
        term *= (n - i) as f64 / (i + 1) as f64 * odds;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    term = 1.0;
    for i in (lo + 1..=mode).rev() {
        term *= i as f64 / (n - i + 1) as f64 / odds;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    let log_mode = ln_choose(n, mode) + mode as f64 * mu.ln() + (n - mode) as f64 * (-mu).ln_1p();
    (log_mode.exp() * sum).min(1.0)
}

/// Binomial 2K prediction for one class: `P(Σ x_i > k/2)` with independent
/// indicators of success probability `mu`.
pub fn binomial_2k(k: usize, mu: f64) -> f64 {
    binomial_upper_tail(k, k / 2 + 1, mu)
}

/// `1 − Φ((1/2 − μ) / σ)`.
pub fn gaussian_majority(mu: f64, variance: f64) -> f64 {
    normal_sf((0.5 - mu) / variance.sqrt())
}

/// Gaussian 2K prediction for one class. `μ ∈ {0, 1}` take their limits.
pub fn gauss_2k(k: usize, mu: f64) -> f64 {
    if mu <= 0.0 {
        return 0.0;
    }
    if mu >= 1.0 {
        return 1.0;
    }
    gaussian_majority(mu, mu * (1.0 - mu) / k as f64)
}

/// 3K prediction for one class. Returns `(f, variance_clamped)`.
///
/// Degree 1 has a single indicator, so the exact binomial value `f = μ` is
/// used there and `cov` is ignored.
pub fn gauss_3k(k: usize, mu: f64, cov: f64) -> (f64, bool) {
    if k == 1 {
        return (mu, false);
    }
    if mu <= 0.0 {
        return (0.0, false);
    }
    if mu >= 1.0 {
        return (1.0, false);
    }
    let kf = k as f64;
    let base = mu * (1.0 - mu) / kf;
    let variance = base + (kf - 1.0) / kf * cov;
    if variance > 0.0 && variance.is_finite() {
        (gaussian_majority(mu, variance), false)
    } else {
        (gaussian_majority(mu, VARIANCE_FLOOR * base), true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Model {
    #[serde(rename = "2k")]
    Binomial2k,
    #[serde(rename = "2k-gauss")]
    Gauss2k,
    #[serde(rename = "3k")]
    ThreeK,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Binomial2k, Model::Gauss2k, Model::ThreeK];

    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Binomial2k => "2k",
            Model::Gauss2k => "2k-gauss",
            Model::ThreeK => "3k",
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2k" => Ok(Model::Binomial2k),
            "2k-gauss" => Ok(Model::Gauss2k),
            "3k" => Ok(Model::ThreeK),
            other => Err(Error::InvalidParameter(format!("unknown model {other:?}"))),
        }
    }
}

/// Structural statistics driving the predictors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInputs {
    pub mu: BTreeMap<usize, f64>,
    /// Required by the 3K model for every class `k ≥ 2`.
    pub cov: Option<BTreeMap<usize, f64>>,
    /// Node degree distribution over the same classes as `mu`.
    pub p: BTreeMap<usize, f64>,
    pub excluded_isolated: u64,
}

impl ModelInputs {
    /// Empirical inputs: `μ_x` and covariance measured on `g`, with `p`
    /// taken over non-isolated nodes so the global value is comparable to
    /// the observed fraction.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let profile = exceedance_profile(g)?;
        let total: u64 = profile.classes.values().map(|c| c.nodes).sum();
        Ok(ModelInputs {
            mu: profile.mu(),
            cov: Some(profile.cov()),
            p: profile
                .classes
                .iter()
                .map(|(&k, c)| (k, c.nodes as f64 / total as f64))
                .collect(),
            excluded_isolated: g.isolated_count() as u64,
        })
    }

    pub fn predict(&self, model: Model) -> Result<ParadoxProfile> {
        let mut profile = match model {
            Model::Binomial2k => predict_2k_binomial(&self.mu, &self.p)?,
            Model::Gauss2k => predict_2k_gauss(&self.mu, &self.p)?,
            Model::ThreeK => {
                let cov = self
                    .cov
                    .as_ref()
                    .ok_or_else(|| Error::ModelInput("3K model requires covariances".into()))?;
                predict_3k(&self.mu, cov, &self.p)?
            }
        };
        profile.excluded_isolated = self.excluded_isolated;
        Ok(profile)
    }
}

fn check_inputs(mu: &BTreeMap<usize, f64>, p: &BTreeMap<usize, f64>) -> Result<()> {
    if !mu.keys().eq(p.keys()) {
        return Err(Error::ModelInput("mu and p cover different degree classes".into()));
    }
    if let Some((k, m)) = mu.iter().find(|(_, m)| !(0.0..=1.0).contains(*m)) {
        return Err(Error::ModelInput(format!("mu({k}) = {m} outside [0, 1]")));
    }
    if mu.contains_key(&0) {
        return Err(Error::ModelInput("degree-0 class has no neighbors".into()));
    }
    Ok(())
}

fn build_profile<F>(mu: &BTreeMap<usize, f64>, p: &BTreeMap<usize, f64>, source: ParadoxSource, mut per_class: F) -> Result<ParadoxProfile>
where
    F: FnMut(usize, f64) -> Result<(f64, bool)>,
{
    check_inputs(mu, p)?;
    let mut classes = BTreeMap::new();
    let mut global_p = 0.0;
    for (&k, &m) in mu {
        let (f, clamped) = per_class(k, m)?;
        let weight = p[&k];
        global_p += weight * f;
        classes.insert(
            k,
            ParadoxClass {
                degree: k,
                f,
                weight,
                nodes: None,
                in_paradox: None,
                variance_clamped: clamped,
            },
        );
    }
    Ok(ParadoxProfile {
        classes,
        global_p,
        k_c: critical_degree_from_p(p),
        definition: ParadoxDefinition::XbarMajority,
        source,
        excluded_isolated: 0,
    })
}

pub fn predict_2k_binomial(mu: &BTreeMap<usize, f64>, p: &BTreeMap<usize, f64>) -> Result<ParadoxProfile> {
    build_profile(mu, p, ParadoxSource::Model2kBinomial, |k, m| Ok((binomial_2k(k, m), false)))
}

pub fn predict_2k_gauss(mu: &BTreeMap<usize, f64>, p: &BTreeMap<usize, f64>) -> Result<ParadoxProfile> {
    build_profile(mu, p, ParadoxSource::Model2kGauss, |k, m| Ok((gauss_2k(k, m), false)))
}

pub fn predict_3k(mu: &BTreeMap<usize, f64>, cov: &BTreeMap<usize, f64>, p: &BTreeMap<usize, f64>) -> Result<ParadoxProfile> {
    build_profile(mu, p, ParadoxSource::Model3k, |k, m| {
        if k == 1 {
            return Ok(gauss_3k(1, m, 0.0));
        }
        let c = cov
            .get(&k)
            .ok_or_else(|| Error::ModelInput(format!("no covariance for degree class {k}")))?;
        Ok(gauss_3k(k, m, *c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Simpson's rule on the standard normal density over [-12, z].
    fn cdf_by_quadrature(z: f64) -> f64 {
        let (a, n) = (-12.0, 200_000);
        let h = (z - a) / n as f64;
        let phi = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = phi(a) + phi(z);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * phi(x);
        }
        s * h / 3.0
    }

    /// Sums over all 2^k indicator outcomes.
    fn binomial_by_enumeration(k: usize, mu: f64) -> f64 {
        (0u32..1 << k)
            .filter(|mask| 2 * mask.count_ones() as usize > k)
            .map(|mask| {
                let ones = mask.count_ones() as i32;
                mu.powi(ones) * (1.0 - mu).powi(k as i32 - ones)
            })
            .sum()
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        assert!((std_normal_cdf(1.959963985) - 0.975).abs() < 1e-9);
        for z in [-7.5, -3.0, -1.0, 0.3, 1.7, 4.0] {
            assert!((std_normal_cdf(z) - cdf_by_quadrature(z)).abs() < 1e-12, "z = {z}");
        }
    }

    #[test]
    fn binomial_small_cases() {
        assert!((binomial_2k(3, 0.5) - 0.5).abs() < 1e-15);
        assert!((binomial_by_enumeration(3, 0.5) - 0.5).abs() < 1e-15);
        for k in 1..=12 {
            for mu in [0.05, 0.3, 0.5, 0.77, 0.99] {
                let exact = binomial_by_enumeration(k, mu);
                assert!((binomial_2k(k, mu) - exact).abs() < 1e-13, "k={k} mu={mu}");
            }
            assert_eq!(binomial_2k(k, 0.0), 0.0);
            assert_eq!(binomial_2k(k, 1.0), 1.0);
        }
    }

    #[test]
    fn binomial_large_k_is_finite() {
        let f = binomial_2k(100_000, 0.5);
        assert!(f.is_finite() && (0.0..=1.0).contains(&f));
        // P(X > n/2) for even n = (1 − P(X = n/2)) / 2.
        let central = (ln_choose(100_000, 50_000) - 100_000.0 * std::f64::consts::LN_2).exp();
        assert!((f - (1.0 - central) / 2.0).abs() < 1e-9);
        assert!(binomial_2k(1_000_001, 0.4) < 1e-300);
        assert!((binomial_2k(1_000_001, 0.6) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_limits_and_symmetry() {
        assert_eq!(gauss_2k(10, 0.5), 0.5);
        assert_eq!(gauss_2k(10, 0.0), 0.0);
        assert_eq!(gauss_2k(10, 1.0), 1.0);
        let a = binomial_2k(101, 0.3);
        assert!((gauss_2k(101, 0.3) - a).abs() < 0.05);
    }

    #[test]
    fn three_k_reductions() {
        for k in 2..50 {
            for mu in [0.1, 0.45, 0.5, 0.8] {
                assert_eq!(gauss_3k(k, mu, 0.0).0.to_bits(), gauss_2k(k, mu).to_bits());
            }
        }
        // Perfectly correlated indicators: variance μ(1−μ) regardless of k.
        let mu: f64 = 0.4;
        let cov = mu * (1.0 - mu);
        let f2 = gauss_3k(2, mu, cov).0;
        for k in [3, 10, 1000] {
            assert!((gauss_3k(k, mu, cov).0 - f2).abs() < 1e-12);
        }
        assert_eq!(gauss_3k(1, 0.7, -5.0), (0.7, false));
    }

    #[test]
    fn three_k_clamps_negative_variance() {
        let (f, clamped) = gauss_3k(5, 0.45, -0.1);
        assert!(clamped);
        assert!(f < 1e-6);
        let (f, clamped) = gauss_3k(5, 0.55, -0.1);
        assert!(clamped && f > 1.0 - 1e-6);
    }

    #[test]
    fn profiles_and_errors() {
        let mu: BTreeMap<usize, f64> = [(1, 1.0), (4, 0.0)].into();
        let p: BTreeMap<usize, f64> = [(1, 0.8), (4, 0.2)].into();
        let prof = predict_2k_binomial(&mu, &p).unwrap();
        assert_eq!(prof.global_p, 0.8);
        assert_eq!(prof.source, ParadoxSource::Model2kBinomial);
        assert_eq!(prof.k_c, 1);

        let cov: BTreeMap<usize, f64> = BTreeMap::new();
        assert!(predict_3k(&mu, &cov, &p).is_err());
        let cov: BTreeMap<usize, f64> = [(4, 0.0)].into();
        assert_eq!(predict_3k(&mu, &cov, &p).unwrap().global_p, 0.8);

        let p_bad: BTreeMap<usize, f64> = [(1, 1.0)].into();
        assert!(predict_2k_gauss(&mu, &p_bad).is_err());
        let mu_bad: BTreeMap<usize, f64> = [(1, 1.5), (4, 0.0)].into();
        assert!(predict_2k_gauss(&mu_bad, &p).is_err());
    }

    #[test]
    fn model_names() {
        for m in Model::ALL {
            assert_eq!(m.as_str().parse::<Model>().unwrap(), m);
        }
    }
}
