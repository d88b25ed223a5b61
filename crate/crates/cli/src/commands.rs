//! Subcommand implementations.

use crate::input::{load_frames, prepare, PreparedFrame};
use crate::output::{fmt_opt, fmt_sig, write_json, CsvWriter};
use crate::{InputArgs, MeasureArgs};
use rayon::prelude::*;
use serde_json::json;
use std::time::Instant;
use waternet::centrality::{CentralityVector, Measure};
use waternet::graph;
use waternet::phase::{
    self, crossing_point, pool_distribution, Histogram, NormalizationMode, ThresholdMode,
};
use waternet::spectral;
use waternet::walkers;
use waternet::{Error, Result};

/// Loads, species-selects and graph-builds every input frame; returns the
/// prepared frames and the number of per-file/per-frame failures (already
/// reported on stderr).
fn prepare_all(io: &InputArgs) -> Result<(Vec<PreparedFrame>, usize)> {
    let (loaded, file_errors) = load_frames(&io.input, io.format)?;
    for fe in &file_errors {
        eprintln!("{}: {}", fe.path.display(), fe.error);
    }
    let (prepared, frame_errors) = prepare(loaded, &io.species, &io.cutoff_config());
    for (id, e) in &frame_errors {
        eprintln!("frame {id}: {e}");
    }
    if prepared.is_empty() {
        return Err(Error::Config("no frames".into()));
    }
    Ok((prepared, file_errors.len() + frame_errors.len()))
}

/// Runs one computation per frame on the worker pool (each worker owns a
/// frame end-to-end) and returns the results in frame order, so output
/// stays deterministic regardless of thread count.
fn per_frame<T: Send>(
    frames: &[PreparedFrame],
    job: impl Fn(&PreparedFrame) -> Result<T> + Sync,
) -> Vec<(String, Result<T>)> {
    frames
        .par_iter()
        .map(|f| (f.source_id.clone(), job(f)))
        .collect()
}

struct ResolvedParams {
    alpha: Option<f64>,
    beta: f64,
}

/// Parses measure names and resolves the Katz attenuation. In auto mode a
/// first pass computes the spectral radius of every frame.
fn resolve_measures(
    args: &MeasureArgs,
    frames: &[PreparedFrame],
) -> Result<(Vec<Measure>, ResolvedParams)> {
    if args.measures.is_empty() {
        return Err(Error::Config("no measures requested".into()));
    }
    let measures: Vec<Measure> = args
        .measures
        .iter()
        .map(|m| Measure::parse(m))
        .collect::<Result<_>>()?;
    let needs_alpha = measures.contains(&Measure::Katz);
    let alpha = if !needs_alpha {
        None
    } else if args.alpha == "auto" {
        let radii: Vec<f64> = frames
            .iter()
            .map(|f| spectral::spectral_radius(&f.graph))
            .collect::<Result<_>>()?;
        let a = walkers::choose_alpha(&radii, args.gamma)?;
        let max_rho = radii.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        eprintln!(
            "alpha(auto): 1/({} * {}) = {}",
            fmt_sig(args.gamma),
            fmt_sig(max_rho),
            fmt_sig(a)
        );
        Some(a)
    } else {
        let a: f64 = args
            .alpha
            .parse()
            .map_err(|_| Error::Config(format!("--alpha must be 'auto' or a number, got {:?}", args.alpha)))?;
        Some(a)
    };
    Ok((
        measures,
        ResolvedParams {
            alpha,
            beta: args.beta,
        },
    ))
}

fn compute_measure(
    g: &waternet::MolecularGraph,
    measure: Measure,
    params: &ResolvedParams,
) -> Result<CentralityVector> {
    match measure {
        Measure::Degree => Ok(walkers::degree_centrality(g)),
        Measure::Closeness => Ok(waternet::paths::closeness(g)),
        Measure::Betweenness => Ok(waternet::paths::betweenness(g)),
        Measure::Eigenvector => walkers::eigenvector_centrality(g),
        Measure::Katz => {
            let alpha = params
                .alpha
                .ok_or_else(|| Error::Config("katz requires --alpha".into()))?;
            walkers::katz(g, alpha)
        }
        Measure::Subgraph => walkers::subgraph_centrality(g, params.beta),
        Measure::TotalCommunicability => walkers::total_communicability(g, params.beta),
    }
}

pub fn build(io: &InputArgs) -> Result<usize> {
    let (frames, mut failures) = prepare_all(io)?;
    let mut csv = CsvWriter::create(
        &io.out.join("graph_summary.csv"),
        &["source_id", "n", "m", "density", "beta_index"],
    )
    .map_err(io_err)?;
    for f in &frames {
        let g = &f.graph;
        let density = graph::density(g).ok();
        let beta = graph::beta_index(g).ok();
        if density.is_none() || beta.is_none() {
            eprintln!(
                "frame {}: degenerate node count {} (density/beta left empty)",
                f.source_id,
                g.n()
            );
            failures += 1;
        }
        csv.row(&[
            f.source_id.clone(),
            g.n().to_string(),
            g.m().to_string(),
            fmt_opt(density),
            fmt_opt(beta),
        ])
        .map_err(io_err)?;
    }
    csv.finish().map_err(io_err)?;
    Ok(failures)
}

pub fn centrality(
    io: &InputArgs,
    args: &MeasureArgs,
    bins: usize,
    normalize_by_edges: bool,
) -> Result<usize> {
    let (frames, mut failures) = prepare_all(io)?;
    let (measures, params) = resolve_measures(args, &frames)?;

    for measure in measures {
        let results = per_frame(&frames, |f| {
            compute_measure(&f.graph, measure, &params).and_then(|v| {
                if normalize_by_edges {
                    v.normalized_by_edges()
                } else {
                    Ok(v)
                }
            })
        });
        let mut vectors: Vec<(String, CentralityVector)> = Vec::new();
        for (source_id, result) in results {
            match result {
                Ok(v) => vectors.push((source_id, v)),
                Err(e) => {
                    eprintln!("frame {source_id}: {measure}: {e}");
                    failures += 1;
                }
            }
        }
        if vectors.is_empty() {
            return Err(Error::Config(format!("measure {measure}: no frame succeeded")));
        }
        for (source_id, v) in &vectors {
            let mut csv = CsvWriter::create(
                &io.out.join(measure.short_name()).join(format!("{source_id}.csv")),
                &["node_id", "score"],
            )
            .map_err(io_err)?;
            for (node, score) in v.scores.iter().enumerate() {
                csv.row(&[node.to_string(), fmt_sig(*score)]).map_err(io_err)?;
            }
            csv.finish().map_err(io_err)?;
        }
        let pooled: Vec<CentralityVector> = vectors.iter().map(|(_, v)| v.clone()).collect();
        let hist = pool_distribution(&pooled, bins, NormalizationMode::Raw)?;
        let path = io.out.join(format!("{}_hist.json", measure.short_name()));
        write_json(&path, &serde_json::to_value(&hist)?).map_err(io_err)?;
    }
    Ok(failures)
}

pub fn metrics(io: &InputArgs) -> Result<usize> {
    let (frames, mut failures) = prepare_all(io)?;
    let header = [
        "source_id",
        "aspl",
        "diameter",
        "algebraic_connectivity",
        "density",
        "bipartivity",
        "energy",
        "lambda_min",
        "lambda_max",
        "s3",
        "s4",
        "s5",
        "p2_over_p1",
        "p3_over_p2",
        "c",
        "c_bar",
        "r",
    ];
    let mut csv = CsvWriter::create(&io.out.join("metrics.csv"), &header).map_err(io_err)?;

    struct Row {
        source_id: String,
        values: [Option<f64>; 16],
    }
    let results = per_frame(&frames, |f| {
        let g = &f.graph;
        let ds = waternet::paths::distance_summary(g);
        let ss = spectral::spectral_summary(g, &[])?;
        let gm = waternet::metrics::global_metrics(g)?;
        let density = graph::density(g)?;
        let p2_over_p1 = (gm.p1 > 0).then(|| gm.p2 as f64 / gm.p1 as f64);
        let p3_over_p2 = (gm.p2 > 0).then(|| gm.p3 as f64 / gm.p2 as f64);
        Ok(Row {
            source_id: f.source_id.clone(),
            values: [
                Some(ds.aspl),
                Some(ds.diameter as f64),
                Some(ss.algebraic_connectivity),
                Some(density),
                Some(ss.bipartivity),
                Some(ss.energy),
                Some(ss.lambda_min),
                Some(ss.lambda_max),
                Some(gm.s3 as f64),
                Some(gm.s4 as f64),
                Some(gm.s5 as f64),
                p2_over_p1,
                p3_over_p2,
                gm.transitivity,
                Some(gm.c_bar),
                gm.assortativity,
            ],
        })
    });
    let mut rows: Vec<Row> = Vec::new();
    for (source_id, result) in results {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => {
                eprintln!("frame {source_id}: {e}");
                failures += 1;
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Config("no frames produced metrics".into()));
    }
    for row in &rows {
        let mut fields = vec![row.source_id.clone()];
        fields.extend(row.values.iter().map(|v| fmt_opt(*v)));
        csv.row(&fields).map_err(io_err)?;
    }
    // mean row: averages over the frames where each column is defined
    let mut fields = vec!["mean".to_string()];
    for col in 0..16 {
        let defined: Vec<f64> = rows.iter().filter_map(|r| r.values[col]).collect();
        let mean = (!defined.is_empty())
            .then(|| defined.iter().sum::<f64>() / defined.len() as f64);
        fields.push(fmt_opt(mean));
    }
    csv.row(&fields).map_err(io_err)?;
    csv.finish().map_err(io_err)?;
    Ok(failures)
}

pub fn classify(
    io: &InputArgs,
    low_ref: &std::path::Path,
    high_ref: &std::path::Path,
    smooth_window: usize,
) -> Result<usize> {
    let read_hist = |p: &std::path::Path| -> Result<Histogram> {
        let text = std::fs::read_to_string(p)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
        Ok(serde_json::from_str(&text)?)
    };
    let h_low = read_hist(low_ref)?;
    let h_high = read_hist(high_ref)?;
    if h_low.measure != h_high.measure || h_low.params != h_high.params {
        return Err(Error::Config(
            "reference histograms disagree on measure or parameters".into(),
        ));
    }
    let x_star = crossing_point(&h_low, &h_high, smooth_window)?;

    let (frames, mut failures) = prepare_all(io)?;
    let params = ResolvedParams {
        alpha: h_low.params.alpha,
        beta: h_low.params.beta.unwrap_or(walkers::DEFAULT_BETA),
    };
    let results = per_frame(&frames, |f| {
        compute_measure(&f.graph, h_low.measure, &params).and_then(|v| {
            if h_low.params.normalized_by_edges {
                v.normalized_by_edges()
            } else {
                Ok(v)
            }
        })
    });
    let mut ids = Vec::new();
    let mut vectors = Vec::new();
    for (source_id, result) in results {
        match result {
            Ok(v) => {
                ids.push(source_id);
                vectors.push(v);
            }
            Err(e) => {
                eprintln!("frame {source_id}: {e}");
                failures += 1;
            }
        }
    }
    if vectors.is_empty() {
        return Err(Error::Config("no frames produced scores".into()));
    }
    let report = phase::classify(&vectors, x_star)?;

    let mut csv = CsvWriter::create(
        &io.out.join("labels.csv"),
        &["source_id", "node_id", "score", "label"],
    )
    .map_err(io_err)?;
    for ((id, v), labels) in ids.iter().zip(&vectors).zip(&report.labels) {
        for (node, (score, label)) in v.scores.iter().zip(labels).enumerate() {
            csv.row(&[
                id.clone(),
                node.to_string(),
                fmt_sig(*score),
                label.to_string(),
            ])
            .map_err(io_err)?;
        }
    }
    csv.finish().map_err(io_err)?;

    let per_frame: Vec<serde_json::Value> = ids
        .iter()
        .zip(&report.labels)
        .map(|(id, labels)| {
            let ldl = labels.iter().filter(|&&l| l == phase::Phase::Ldl).count();
            json!({"source_id": id, "nodes": labels.len(), "ldl": ldl})
        })
        .collect();
    let report_json = json!({
        "x_star": report.x_star,
        "measure": report.measure,
        "params": report.params,
        "ldl_fraction": report.ldl_fraction,
        "bins": h_low.bins(),
        "smooth_window": smooth_window,
        "frames": per_frame,
    });
    write_json(&io.out.join("phase_report.json"), &report_json).map_err(io_err)?;
    println!(
        "x_star = {}, LDL fraction = {}",
        fmt_sig(report.x_star),
        fmt_sig(report.ldl_fraction)
    );
    Ok(failures)
}

pub fn patches(io: &InputArgs, args: &MeasureArgs, mode: ThresholdMode) -> Result<usize> {
    let (frames, mut failures) = prepare_all(io)?;
    let (measures, params) = resolve_measures(args, &frames)?;
    if measures.len() != 1 {
        return Err(Error::Config(
            "patches expects exactly one measure in --measures".into(),
        ));
    }
    let measure = measures[0];

    let results = per_frame(&frames, |f| {
        compute_measure(&f.graph, measure, &params)
            .and_then(|scores| phase::patches(&f.graph, &scores, mode).map(|r| (scores, r)))
    });

    let mut frame_reports = Vec::new();
    for (f, (source_id, result)) in frames.iter().zip(results) {
        let (scores, report) = match result {
            Ok(v) => v,
            Err(e) => {
                eprintln!("frame {source_id}: {e}");
                failures += 1;
                continue;
            }
        };
        let to_orig = |node: usize| f.graph.node_map().map_or(node, |m| m[node]);

        // per-node export for visualization
        let mut csv = CsvWriter::create(
            &io.out.join("patches").join(format!("{}.csv", f.source_id)),
            &["node_id", "orig_index", "x", "y", "z", "score", "patch_id"],
        )
        .map_err(io_err)?;
        let mut patch_of = vec![None::<usize>; f.graph.n()];
        for (pi, patch) in report.patches.iter().enumerate() {
            for &v in &patch.nodes {
                patch_of[v] = Some(pi);
            }
        }
        for node in 0..f.graph.n() {
            let pos = f.frame.as_ref().map(|fr| fr.positions()[node]);
            csv.row(&[
                node.to_string(),
                to_orig(node).to_string(),
                pos.map(|p| fmt_sig(p[0])).unwrap_or_default(),
                pos.map(|p| fmt_sig(p[1])).unwrap_or_default(),
                pos.map(|p| fmt_sig(p[2])).unwrap_or_default(),
                fmt_sig(scores.scores[node]),
                patch_of[node].map(|p| p.to_string()).unwrap_or_default(),
            ])
            .map_err(io_err)?;
        }
        csv.finish().map_err(io_err)?;

        let patches_json: Vec<serde_json::Value> = report
            .patches
            .iter()
            .map(|p| {
                json!({
                    "nodes": p.nodes.iter().map(|&v| to_orig(v)).collect::<Vec<_>>(),
                    "size": p.size,
                    "internal_density": p.internal_density,
                    "external_density": p.external_density,
                    "mean_score": p.mean_score,
                })
            })
            .collect();
        frame_reports.push(json!({
            "source_id": f.source_id,
            "threshold": report.threshold,
            "patches": patches_json,
            "singletons": report.singletons.iter().map(|&v| to_orig(v)).collect::<Vec<_>>(),
        }));
    }
    if frame_reports.is_empty() {
        return Err(Error::Config("no frames produced patches".into()));
    }
    let doc = json!({"measure": measure, "frames": frame_reports});
    write_json(&io.out.join("patches.json"), &doc).map_err(io_err)?;
    Ok(failures)
}

pub fn bench(io: &InputArgs, args: &MeasureArgs) -> Result<usize> {
    let (frames, failures) = prepare_all(io)?;
    let (measures, params) = resolve_measures(args, &frames)?;

    // measurement is always single-threaded
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let mut per_measure = Vec::new();
    for &measure in &measures {
        let mut times = Vec::with_capacity(frames.len());
        for f in &frames {
            let start = Instant::now();
            pool.install(|| compute_measure(&f.graph, measure, &params))?;
            times.push(start.elapsed().as_secs_f64());
        }
        let mean = times.iter().sum::<f64>() / times.len() as f64;
        let min = times.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = times.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        println!(
            "{measure}: mean {}s min {}s max {}s",
            fmt_sig(mean),
            fmt_sig(min),
            fmt_sig(max)
        );
        per_measure.push(json!({
            "measure": measure,
            "mean_s": mean,
            "min_s": min,
            "max_s": max,
        }));
    }
    let mean_m = frames.iter().map(|f| f.graph.m() as f64).sum::<f64>() / frames.len() as f64;
    let doc = json!({
        "frame_count": frames.len(),
        "n": frames[0].graph.n(),
        "mean_m": mean_m,
        "measures": per_measure,
    });
    write_json(&io.out.join("timing.json"), &doc).map_err(io_err)?;
    Ok(failures)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("I/O error: {e}"))
}
