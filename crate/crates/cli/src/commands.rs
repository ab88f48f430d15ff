use std::fs;
use std::path::{Path, PathBuf};

use paradox_lens_core::report;
use paradox_lens_core::{
    critical_degree, degree_stats, empirical_lognormal_point, exceedance_profile, generate_2k,
    generate_core_periphery, load_edge_list_path, mu_half_crossing, observed_paradox, q_exceed_prob,
    sweep_global_paradox, transition_width, xbar_distribution, CorePeripheryWiring, Error, GenerationSpec, Graph,
    IngestionReport, JointDegreeDistribution, LoadOptions, LogNormalParams, ParadoxDefinition, ParadoxProfile,
    Target, TransitionWidth,
};
use serde::Serialize;

use crate::manifest::{sha256_hex, Run, SCHEMA_VERSION};
use crate::{AnalyzeArgs, CliError, CliResult, GenerateArgs, InputArgs, PredictArgs, SweepArgs};

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

fn load(io: &InputArgs, run: &mut Run) -> CliResult<(Graph, IngestionReport)> {
    let options = LoadOptions {
        symmetrize: !io.no_symmetrize,
    };
    let loaded = load_edge_list_path(&io.input, options).map_err(|e| match e {
        Error::Io(err) => Error::Io(std::io::Error::new(err.kind(), format!("{}: {err}", io.input.display()))),
        other => other,
    })?;
    run.input(&io.input)?;
    fs::create_dir_all(&io.out_dir)?;
    Ok(loaded)
}

#[derive(Serialize)]
struct XbarSummary {
    degree: usize,
    nodes: u64,
    /// Nodes with strictly more than half of their neighbors larger.
    majority_larger: u64,
}

#[derive(Serialize)]
struct AnalyzeSummary<'a> {
    schema_version: u32,
    input: String,
    ingestion: &'a IngestionReport,
    nodes: u64,
    edges: u64,
    max_degree: usize,
    mean_degree: f64,
    assortativity: f64,
    /// Exact numerator and denominator, as decimal strings.
    assortativity_ratio: [String; 2],
    q_exceed: f64,
    k_c: usize,
    mu_half_crossing: Option<usize>,
    definition: ParadoxDefinition,
    global_p: f64,
    in_paradox: u64,
    non_isolated_nodes: u64,
    xbar_at_k_c: XbarSummary,
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<Vec<String>> {
    let mut run = Run::new();
    let (g, ingestion) = load(&args.io, &mut run)?;
    let dir = &args.io.out_dir;
    let stats = degree_stats(&g)?;
    let exceedance = exceedance_profile(&g)?;
    let observed = observed_paradox(&g, args.io.definition.into())?;
    let k_c = critical_degree(&stats);
    let xbar = xbar_distribution(&g, k_c)?;

    run.write(dir.join("degree_distribution.csv"), |o| Ok(report::write_degree_distribution(&stats, o)?))?;
    run.write(dir.join("joint_degree.csv"), |o| Ok(report::write_joint(&stats, o)?))?;
    run.write(dir.join("exceedance.csv"), |o| Ok(report::write_exceedance(&exceedance, o)?))?;
    if args.bins > 0 {
        let bins = exceedance.log_binned(args.bins, args.min_bin_nodes);
        run.write(dir.join("exceedance_smoothed.csv"), |o| Ok(report::write_smoothed(&bins, o)?))?;
    }
    run.write(dir.join("observed.csv"), |o| Ok(report::write_observed(&observed, o)?))?;
    run.write(dir.join("xbar_k_c.csv"), |o| Ok(report::write_xbar(&xbar, o)?))?;

    let (in_paradox, non_isolated) = observed.observed_ratio().unwrap_or((0, 0));
    let majority_larger = xbar.counts.iter().enumerate().filter(|(j, _)| 2 * j > k_c).map(|(_, &c)| c).sum();
    let summary = AnalyzeSummary {
        schema_version: SCHEMA_VERSION,
        input: args.io.input.display().to_string(),
        ingestion: &ingestion,
        nodes: stats.node_count,
        edges: stats.edge_count,
        max_degree: stats.max_degree(),
        mean_degree: stats.mean_degree,
        assortativity: stats.assortativity,
        assortativity_ratio: [stats.assortativity_ratio.0.to_string(), stats.assortativity_ratio.1.to_string()],
        q_exceed: q_exceed_prob(&stats),
        k_c,
        mu_half_crossing: mu_half_crossing(&exceedance.mu()),
        definition: observed.definition,
        global_p: observed.global_p,
        in_paradox,
        non_isolated_nodes: non_isolated,
        xbar_at_k_c: XbarSummary {
            degree: k_c,
            nodes: xbar.total(),
            majority_larger,
        },
    };
    run.write_json(dir.join("summary.json"), &summary)?;
    run.finish(&dir.join("manifest.json"))
}

#[derive(Serialize)]
struct ModelSummary {
    model: &'static str,
    global_p: f64,
    /// Mean over degree classes of `|f_model(k) − f_observed(k)|`.
    class_mean_abs_error: f64,
    variance_clamped_classes: Vec<usize>,
}

#[derive(Serialize)]
struct PredictSummary {
    schema_version: u32,
    input: String,
    definition: ParadoxDefinition,
    observed_global_p: f64,
    in_paradox: u64,
    non_isolated_nodes: u64,
    models: Vec<ModelSummary>,
}

fn class_mean_abs_error(model: &ParadoxProfile, observed: &ParadoxProfile) -> f64 {
    let errors: Vec<f64> = observed
        .classes
        .iter()
        .filter_map(|(k, o)| model.classes.get(k).map(|m| (m.f - o.f).abs()))
        .collect();
    errors.iter().sum::<f64>() / errors.len() as f64
}

pub fn predict(args: &PredictArgs) -> CliResult<Vec<String>> {
    let mut run = Run::new();
    let (g, _) = load(&args.io, &mut run)?;
    let dir = &args.io.out_dir;
    let inputs = paradox_lens_core::ModelInputs::from_graph(&g)?;
    let observed = observed_paradox(&g, args.io.definition.into())?;
    let models = args.model.models();
    let predictions = models
        .iter()
        .map(|&m| inputs.predict(m))
        .collect::<paradox_lens_core::Result<Vec<_>>>()?;

    let mut columns = vec![&observed];
    columns.extend(predictions.iter());
    run.write(dir.join("predictions.csv"), |o| Ok(report::write_predictions(&columns, o)?))?;

    let mut summaries = Vec::new();
    for (model, profile) in models.iter().zip(&predictions) {
        let clamped = profile.clamped_classes();
        if !clamped.is_empty() {
            run.warn(format!(
                "{} model: variance clamped for degree classes {clamped:?}",
                model.as_str()
            ));
        }
        summaries.push(ModelSummary {
            model: model.as_str(),
            global_p: profile.global_p,
            class_mean_abs_error: class_mean_abs_error(profile, &observed),
            variance_clamped_classes: clamped,
        });
    }
    let (in_paradox, non_isolated) = observed.observed_ratio().unwrap_or((0, 0));
    let summary = PredictSummary {
        schema_version: SCHEMA_VERSION,
        input: args.io.input.display().to_string(),
        definition: observed.definition,
        observed_global_p: observed.global_p,
        in_paradox,
        non_isolated_nodes: non_isolated,
        models: summaries,
    };
    run.write_json(dir.join("predictions.json"), &summary)?;
    run.finish(&dir.join("manifest.json"))
}

fn read_matrix(path: &Path) -> CliResult<JointDegreeDistribution> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("matrix file has no {name:?} column"),
            })
    };
    let (ik, ik2, ie) = (column("k")?, column("k2")?, column("e")?);
    let mut cells = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let field = |j: usize| record.get(j).unwrap_or("").trim();
        let bad = |what: &str, value: &str| Error::Parse {
            line: i + 2,
            message: format!("{what} {value:?} is not a valid number"),
        };
        let k: usize = field(ik).parse().map_err(|_| bad("degree", field(ik)))?;
        let k2: usize = field(ik2).parse().map_err(|_| bad("degree", field(ik2)))?;
        let e: f64 = field(ie).parse().map_err(|_| bad("weight", field(ie)))?;
        cells.push(((k, k2), e));
    }
    Ok(JointDegreeDistribution::from_weights(cells)?)
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

pub fn generate(args: &GenerateArgs) -> CliResult<Vec<String>> {
    let mut run = Run::new();
    run.seed(args.seed);
    let node_count = || {
        args.nodes
            .ok_or_else(|| CliError::Usage("--nodes is required for --lognormal and --matrix".into()))
    };
    let mut header = vec![format!("paradox-lens {} generate", env!("CARGO_PKG_VERSION"))];

    let graph = if let Some(tiers) = &args.core_periphery {
        let &[n_core, n_mid, n_leaf] = tiers.as_slice() else {
            return Err(CliError::Usage("--core-periphery takes N_CORE,N_MID,N_LEAF".into()));
        };
        let wiring = CorePeripheryWiring {
            mid_degree_min: args.mid_degree_min,
            mid_degree_max: args.mid_degree_max,
            beta_low: args.beta_low,
            beta_high: args.beta_high,
            purity: args.purity,
        };
        let description = format!(
            "core-periphery core={n_core} mid={n_mid} leaf={n_leaf} mid_degree={}..={} beta={}..{} purity={}",
            wiring.mid_degree_min, wiring.mid_degree_max, wiring.beta_low, wiring.beta_high, wiring.purity
        );
        let g = generate_core_periphery(n_core, n_mid, n_leaf, &wiring, args.seed)?;
        header.push(format!("target {description}"));
        header.push(format!("target_sha256 {}", sha256_hex(description.as_bytes())));
        header.push(format!("seed {}", args.seed));
        header.push(format!("assortativity {}", degree_stats(&g)?.assortativity));
        g
    } else {
        let target = if let Some(v) = &args.lognormal {
            let params = LogNormalParams::new(v[0], v[1], v[2]).map_err(usage)?;
            Target::LogNormal {
                params,
                k_max: args.k_max,
            }
        } else {
            let path = args.matrix.as_ref().expect("clap requires one target");
            run.input(path)?;
            Target::Joint(read_matrix(path)?)
        };
        let spec = GenerationSpec::new(target, node_count()?, args.seed);
        let (g, gen) = generate_2k(&spec)?;
        if gen.dropped_edges > 0 {
            run.warn(format!("{} conflicting edges could not be repaired and were dropped", gen.dropped_edges));
        }
        let description = spec.describe();
        header.push(format!("target {description}"));
        header.push(format!("target_sha256 {}", sha256_hex(description.as_bytes())));
        header.push(format!("seed {}", args.seed));
        header.push(format!("assortativity {}", gen.realized_assortativity));
        header.push(format!("report {}", serde_json::to_string(&gen)?));
        g
    };
    header.push(format!("nodes {} edges {}", graph.node_count(), graph.edge_count()));

    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    run.write(args.out.clone(), |o| Ok(graph.write_edge_list(o, &header)?))?;
    let manifest = args.manifest.clone().unwrap_or_else(|| sidecar(&args.out));
    run.finish(&manifest)
}

#[derive(Serialize)]
struct SweepRow {
    c: f64,
    r: f64,
    p_paradox: f64,
    /// Degrees over which f falls from 0.9 to 0.1; absent when f stays
    /// above 0.1 on the whole support.
    transition: Option<TransitionWidth>,
    transition_width: Option<usize>,
}

#[derive(Serialize)]
struct SweepSummary {
    schema_version: u32,
    m: f64,
    s: f64,
    k_max: usize,
    points: Vec<SweepRow>,
    empirical: Option<Vec<paradox_lens_core::EmpiricalPoint>>,
}

pub fn sweep(args: &SweepArgs) -> CliResult<Vec<String>> {
    let mut run = Run::new();
    let params = args
        .c_list
        .iter()
        .map(|&c| LogNormalParams::new(args.m, args.s, c))
        .collect::<paradox_lens_core::Result<Vec<_>>>()
        .map_err(usage)?;
    if params.is_empty() {
        return Err(CliError::Usage("--c-list is empty".into()));
    }
    fs::create_dir_all(&args.out_dir)?;
    let points = sweep_global_paradox(args.m, args.s, &args.c_list, args.k_max)?;

    let empirical = match args.empirical {
        Some(n) => {
            let mut measured = Vec::with_capacity(params.len());
            for (i, p) in params.iter().enumerate() {
                let seed = args.seed + i as u64;
                run.seed(seed);
                let point = empirical_lognormal_point(p, args.k_max, n, seed)?;
                if point.report.dropped_edges > 0 {
                    run.warn(format!("c = {}: {} conflicting edges dropped", p.c, point.report.dropped_edges));
                }
                measured.push(point);
            }
            Some(measured)
        }
        None => None,
    };

    let curve_k_max = args.curve_k_max.unwrap_or(args.k_max);
    run.write(args.out_dir.join("f_curves.csv"), |o| {
        Ok(report::write_f_curves(&params, curve_k_max, o)?)
    })?;
    run.write(args.out_dir.join("sweep.csv"), |o| {
        Ok(report::write_sweep(&points, empirical.as_deref(), o)?)
    })?;

    let rows = params
        .iter()
        .zip(&points)
        .map(|(p, point)| {
            let transition = transition_width(p, args.k_max, 0.9, 0.1).ok();
            SweepRow {
                c: point.c,
                r: point.r,
                p_paradox: point.p_paradox,
                transition,
                transition_width: transition.map(|t| t.width()),
            }
        })
        .collect();
    let summary = SweepSummary {
        schema_version: SCHEMA_VERSION,
        m: args.m,
        s: args.s,
        k_max: args.k_max,
        points: rows,
        empirical,
    };
    run.write_json(args.out_dir.join("sweep_summary.json"), &summary)?;
    run.finish(&args.out_dir.join("manifest.json"))
}
