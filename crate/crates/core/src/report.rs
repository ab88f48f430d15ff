//! Plot-ready CSV tables. Rows are sorted by degree or parameter, floats use
//! Rust's shortest round-trip formatting, and undefined values are `NA`.

use std::io::Write;

use crate::degree::DegreeStats;
use crate::generate::EmpiricalPoint;
use crate::lognormal::{LogNormalParams, SweepPoint};
use crate::paradox::ParadoxProfile;
use crate::triplet::{ExceedanceProfile, SmoothedClass, XbarDistribution};
use crate::error::Result;

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

fn writer<W: Write>(out: W, header: &[&str]) -> Result<csv::Writer<W>> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    Ok(w)
}

/// `k,nodes,p,endpoints,q`, including degree 0 when present.
pub fn write_degree_distribution<W: Write>(stats: &DegreeStats, out: W) -> Result<()> {
    let mut w = writer(out, &["k", "nodes", "p", "endpoints", "q"])?;
    for (&k, &nodes) in &stats.nodes_by_degree {
        w.write_record([
            k.to_string(),
            nodes.to_string(),
            stats.p[&k].to_string(),
            stats.endpoint_count(k).to_string(),
            stats.q.get(&k).copied().unwrap_or(0.0).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `k,k2,endpoints,e` over the nonzero ordered cells.
pub fn write_joint<W: Write>(stats: &DegreeStats, out: W) -> Result<()> {
    let mut w = writer(out, &["k", "k2", "endpoints", "e"])?;
    for (&(k, k2), &count) in &stats.joint_counts {
        w.write_record([
            k.to_string(),
            k2.to_string(),
            count.to_string(),
            stats.joint_probability(k, k2).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_exceedance<W: Write>(profile: &ExceedanceProfile, out: W) -> Result<()> {
    let mut w = writer(out, &["k", "nodes", "pairs", "mu", "cov", "rho"])?;
    for c in profile.classes.values() {
        w.write_record([
            c.degree.to_string(),
            c.nodes.to_string(),
            c.pairs.to_string(),
            c.mu.to_string(),
            opt(c.cov),
            opt(c.rho),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_smoothed<W: Write>(bins: &[SmoothedClass], out: W) -> Result<()> {
    let mut w = writer(out, &["k_min", "k_max", "k_mean", "nodes", "pairs", "mu", "cov", "rho"])?;
    for b in bins {
        w.write_record([
            b.k_min.to_string(),
            b.k_max.to_string(),
            b.k_mean.to_string(),
            b.nodes.to_string(),
            b.pairs.to_string(),
            b.mu.to_string(),
            opt(b.cov),
            opt(b.rho),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `larger,xbar,count` for every possible value `j/k`.
pub fn write_xbar<W: Write>(dist: &XbarDistribution, out: W) -> Result<()> {
    let mut w = writer(out, &["larger", "xbar", "count"])?;
    for (j, (x, count)) in dist.iter().enumerate() {
        w.write_record([j.to_string(), x.to_string(), count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_observed<W: Write>(profile: &ParadoxProfile, out: W) -> Result<()> {
    let mut w = writer(out, &["k", "nodes", "in_paradox", "p", "f"])?;
    for c in profile.classes.values() {
        w.write_record([
            c.degree.to_string(),
            c.nodes.map_or_else(|| "NA".into(), |n| n.to_string()),
            c.in_paradox.map_or_else(|| "NA".into(), |n| n.to_string()),
            c.weight.to_string(),
            c.f.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// One row per degree: `k,p`, one `f_<source>` column per profile, and a
/// `variance_clamped` flag column for each profile that can clamp. Every
/// profile must cover the same degrees.
pub fn write_predictions<W: Write>(profiles: &[&ParadoxProfile], out: W) -> Result<()> {
    let mut header = vec!["k".to_string(), "p".to_string()];
    for p in profiles {
        header.push(format!("f_{}", p.source.as_str().trim_start_matches("model-").replace('-', "_")));
    }
    let clamping: Vec<usize> = profiles
        .iter()
        .enumerate()
        .filter(|(_, p)| p.source == crate::paradox::ParadoxSource::Model3k)
        .map(|(i, _)| i)
        .collect();
    for &i in &clamping {
        header.push(format!("{}_variance_clamped", header[i + 2].trim_start_matches("f_")));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&header)?;
    let Some(first) = profiles.first() else {
        w.flush()?;
        return Ok(());
    };
    for (&k, class) in &first.classes {
        let mut row = vec![k.to_string(), class.weight.to_string()];
        for p in profiles {
            row.push(opt(p.classes.get(&k).map(|c| c.f)));
        }
        for &i in &clamping {
            let flag = profiles[i].classes.get(&k).is_some_and(|c| c.variance_clamped);
            row.push((flag as u8).to_string());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `c,k,f` for the closed-form log-normal profile on `1..=k_max`.
pub fn write_f_curves<W: Write>(params: &[LogNormalParams], k_max: usize, out: W) -> Result<()> {
    let mut w = writer(out, &["c", "k", "mu", "f"])?;
    for p in params {
        for k in 1..=k_max {
            w.write_record([
                p.c.to_string(),
                k.to_string(),
                p.mu_x(k as f64).to_string(),
                p.f(k).to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `c,r,P_paradox`, plus measured columns when empirical points are given
/// (matched to analytic points by position).
pub fn write_sweep<W: Write>(points: &[SweepPoint], empirical: Option<&[EmpiricalPoint]>, out: W) -> Result<()> {
    let mut header = vec!["c", "r", "P_paradox"];
    if empirical.is_some() {
        header.extend(["r_empirical", "P_paradox_empirical", "P_paradox_empirical_xbar", "nodes", "seed", "joint_tv", "dropped_edges"]);
    }
    let mut w = writer(out, &header)?;
    for (i, p) in points.iter().enumerate() {
        let mut row = vec![p.c.to_string(), p.r.to_string(), p.p_paradox.to_string()];
        if let Some(e) = empirical.and_then(|e| e.get(i)) {
            row.extend([
                e.r.to_string(),
                e.global_p.to_string(),
                e.global_p_xbar.to_string(),
                e.report.node_count.to_string(),
                e.report.seed.to_string(),
                e.report.joint_tv.to_string(),
                e.report.dropped_edges.to_string(),
            ]);
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
