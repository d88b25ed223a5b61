//! Distribution pooling, the crossing-point threshold, LDL/HDL
//! classification and high-centrality patch extraction.
//!
//! Scores from all frames of a trajectory are pooled into one histogram;
//! the decision threshold x* is the crossing of the pooled low- and
//! high-temperature densities between their modes; a node is LDL iff its
//! score is at most x*.

use crate::centrality::{CentralityParams, CentralityVector, Measure};
use crate::error::{Error, Result};
use crate::graph::{connected_components, density, subgraph_densities, MolecularGraph};
use serde::{Deserialize, Serialize};

/// Default bin count for pooled distributions.
pub const DEFAULT_BINS: usize = 200;

/// Default moving-average smoothing window (in bins) for crossing search.
pub const DEFAULT_SMOOTH_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NormalizationMode {
    #[default]
    Raw,
    /// Each frame's scores divided by that frame's edge count before pooling.
    PerEdge,
}

/// Uniform-bin histogram of pooled node scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub measure: Measure,
    pub params: CentralityParams,
    pub mode: NormalizationMode,
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl Histogram {
    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.bins() as f64
    }

    /// Strictly increasing bin edges, bins()+1 of them.
    pub fn edges(&self) -> Vec<f64> {
        let w = self.bin_width();
        (0..=self.bins()).map(|i| self.lo + i as f64 * w).collect()
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        self.lo + (i as f64 + 0.5) * self.bin_width()
    }

    /// Probability density per bin: count / (total * width).
    pub fn densities(&self) -> Vec<f64> {
        let scale = 1.0 / (self.total as f64 * self.bin_width());
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }

    fn bin_of(&self, x: f64) -> usize {
        let w = self.bin_width();
        let idx = ((x - self.lo) / w).floor() as isize;
        idx.clamp(0, self.bins() as isize - 1) as usize
    }
}

/// Pools all node scores across frames into one histogram over the pooled
/// min-max range. With `PerEdge`, each frame's scores are divided by that
/// frame's edge count first. All vectors must share measure and params.
pub fn pool_distribution(
    vectors: &[CentralityVector],
    bins: usize,
    mode: NormalizationMode,
) -> Result<Histogram> {
    if vectors.is_empty() {
        return Err(Error::Param("no score vectors to pool".into()));
    }
    if bins == 0 {
        return Err(Error::Param("need at least one bin".into()));
    }
    let measure = vectors[0].measure;
    let params = vectors[0].params;
    for v in vectors {
        if v.measure != measure || v.params != params {
            return Err(Error::Param(format!(
                "mixed measures in pooled distribution: {}({:?}) vs {}({:?})",
                measure, params, v.measure, v.params
            )));
        }
    }
    if mode == NormalizationMode::PerEdge && params.normalized_by_edges {
        return Err(Error::Param(
            "per-edge pooling of already edge-normalized scores".into(),
        ));
    }

    let mut values = Vec::new();
    for v in vectors {
        match mode {
            NormalizationMode::Raw => values.extend_from_slice(&v.scores),
            NormalizationMode::PerEdge => {
                if v.edge_count == 0 {
                    return Err(Error::Param(
                        "per-edge normalization of a frame with no edges".into(),
                    ));
                }
                let m = v.edge_count as f64;
                values.extend(v.scores.iter().map(|s| s / m));
            }
        }
    }
    if values.is_empty() {
        return Err(Error::Param("no scores to pool".into()));
    }

    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        hi = lo + 1.0; // degenerate range: a single occupied bin
    }
    let mut h = Histogram {
        measure,
        params: CentralityParams {
            normalized_by_edges: params.normalized_by_edges
                || mode == NormalizationMode::PerEdge,
            ..params
        },
        mode,
        lo,
        hi,
        counts: vec![0; bins],
        total: 0,
    };
    for x in values {
        let b = h.bin_of(x);
        h.counts[b] += 1;
        h.total += 1;
    }
    Ok(h)
}

fn moving_average(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let n = values.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// Re-bins a histogram onto a uniform target grid by distributing each
/// source bin's count over the target bins it overlaps, proportionally.
fn rebin(h: &Histogram, lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    let mut out = vec![0.0; bins];
    let tw = (hi - lo) / bins as f64;
    let sw = h.bin_width();
    for (i, &c) in h.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let slo = h.lo + i as f64 * sw;
        let shi = slo + sw;
        let first = (((slo - lo) / tw).floor() as isize).clamp(0, bins as isize - 1) as usize;
        let last = (((shi - lo) / tw).ceil() as isize - 1).clamp(0, bins as isize - 1) as usize;
        for t in first..=last {
            let tlo = lo + t as f64 * tw;
            let thi = tlo + tw;
            let overlap = (shi.min(thi) - slo.max(tlo)).max(0.0);
            out[t] += c as f64 * overlap / sw;
        }
    }
    out
}

/// Crossing point x* of two pooled distributions.
///
/// Both histograms are re-binned onto a common grid, converted to smoothed
/// densities (moving average over `window` bins), and the sign changes of
/// (low - high) strictly between the two modes are located. The crossing
/// with the largest combined density wins; ties go to the lowest x.
pub fn crossing_point(h_low: &Histogram, h_high: &Histogram, window: usize) -> Result<f64> {
    if h_low.total == 0 || h_high.total == 0 {
        return Err(Error::Param("empty histogram".into()));
    }
    let lo = h_low.lo.min(h_high.lo);
    let hi = h_low.hi.max(h_high.hi);
    let bins = h_low.bins().max(h_high.bins());
    let w = (hi - lo) / bins as f64;

    let to_density = |h: &Histogram| -> Vec<f64> {
        let counts = rebin(h, lo, hi, bins);
        let scale = 1.0 / (h.total as f64 * w);
        moving_average(
            &counts.iter().map(|&c| c * scale).collect::<Vec<_>>(),
            window,
        )
    };
    let d_low = to_density(h_low);
    let d_high = to_density(h_high);

    let argmax = |d: &[f64]| {
        d.iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap()
    };
    let mode_low = argmax(&d_low);
    let mode_high = argmax(&d_high);
    let (m_lo, m_hi) = (mode_low.min(mode_high), mode_low.max(mode_high));
    if m_hi <= m_lo + 1 {
        return Err(Error::NoCrossing);
    }

    let center = |i: usize| lo + (i as f64 + 0.5) * w;
    let mut crossings: Vec<(f64, f64)> = Vec::new(); // (x, combined density)
    for i in m_lo..m_hi {
        let di = d_low[i] - d_high[i];
        let dj = d_low[i + 1] - d_high[i + 1];
        let (x, frac) = if di == 0.0 {
            (center(i), 0.0)
        } else if di * dj < 0.0 {
            let f = di / (di - dj);
            (center(i) + f * w, f)
        } else {
            continue;
        };
        if x <= center(m_lo) || x >= center(m_hi) {
            continue;
        }
        let combined = (d_low[i] + d_high[i]) * (1.0 - frac) + (d_low[i + 1] + d_high[i + 1]) * frac;
        crossings.push((x, combined));
    }
    if crossings.is_empty() {
        return Err(Error::NoCrossing);
    }
    let best = crossings
        .iter()
        .cloned()
        .reduce(|a, b| {
            if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
                b
            } else {
                a
            }
        })
        .unwrap();
    Ok(best.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    Ldl,
    Hdl,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Phase::Ldl => "LDL",
            Phase::Hdl => "HDL",
        })
    }
}

/// Threshold, per-node labels and the pooled LDL fraction of a trajectory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PhaseReport {
    pub x_star: f64,
    pub measure: Measure,
    pub params: CentralityParams,
    /// One label vector per input frame, in input order.
    pub labels: Vec<Vec<Phase>>,
    /// LDL nodes over all nodes of all frames.
    pub ldl_fraction: f64,
}

/// Labels every node: LDL iff score <= x*, pooled over all frames.
pub fn classify(scores: &[CentralityVector], x_star: f64) -> Result<PhaseReport> {
    if scores.is_empty() {
        return Err(Error::Param("no score vectors to classify".into()));
    }
    if !x_star.is_finite() {
        return Err(Error::Param(format!("threshold must be finite, got {x_star}")));
    }
    let measure = scores[0].measure;
    let params = scores[0].params;
    let mut labels = Vec::with_capacity(scores.len());
    let mut ldl = 0usize;
    let mut total = 0usize;
    for v in scores {
        if v.measure != measure || v.params != params {
            return Err(Error::Param("mixed measures in classification".into()));
        }
        let frame_labels: Vec<Phase> = v
            .scores
            .iter()
            .map(|&s| if s <= x_star { Phase::Ldl } else { Phase::Hdl })
            .collect();
        ldl += frame_labels.iter().filter(|&&l| l == Phase::Ldl).count();
        total += frame_labels.len();
        labels.push(frame_labels);
    }
    Ok(PhaseReport {
        x_star,
        measure,
        params,
        labels,
        ldl_fraction: if total > 0 { ldl as f64 / total as f64 } else { 0.0 },
    })
}

/// How the patch threshold is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// Strictly above the mean score.
    Mean,
    /// Strictly above the given value.
    Value(f64),
}

/// A connected set of at least two nodes whose scores exceed the threshold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Patch {
    pub nodes: Vec<usize>,
    pub size: usize,
    pub internal_density: f64,
    pub external_density: f64,
    pub mean_score: f64,
}

/// Patches plus the leftover singletons and the threshold actually used.
#[derive(Debug, Clone)]
pub struct PatchReport {
    pub threshold: f64,
    pub patches: Vec<Patch>,
    /// High-score nodes whose induced component has size 1; reported but
    /// not patches.
    pub singletons: Vec<usize>,
}

/// Extracts the connected components of the subgraph induced by the nodes
/// scoring above the threshold; components of size >= 2 become patches,
/// sorted by size descending.
pub fn patches(
    g: &MolecularGraph,
    scores: &CentralityVector,
    mode: ThresholdMode,
) -> Result<PatchReport> {
    if scores.len() != g.n() {
        return Err(Error::Param(format!(
            "{} scores for {} nodes",
            scores.len(),
            g.n()
        )));
    }
    let threshold = match mode {
        ThresholdMode::Mean => {
            if g.n() == 0 {
                return Err(Error::Param("empty graph".into()));
            }
            scores.scores.iter().sum::<f64>() / g.n() as f64
        }
        ThresholdMode::Value(x) => x,
    };
    let selected: Vec<usize> = (0..g.n())
        .filter(|&v| scores.scores[v] > threshold)
        .collect();
    if selected.is_empty() {
        return Ok(PatchReport {
            threshold,
            patches: Vec::new(),
            singletons: Vec::new(),
        });
    }

    // induced subgraph on the selected nodes
    let mut local = vec![usize::MAX; g.n()];
    for (li, &v) in selected.iter().enumerate() {
        local[v] = li;
    }
    let mut edges = Vec::new();
    for &(a, b) in g.edges() {
        let (la, lb) = (local[a as usize], local[b as usize]);
        if la != usize::MAX && lb != usize::MAX {
            edges.push((la as u32, lb as u32));
        }
    }
    let induced = MolecularGraph::from_edges(selected.len(), edges)?;
    let comps = connected_components(&induced);

    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); comps.count()];
    for (li, &v) in selected.iter().enumerate() {
        groups[comps.component_id[li]].push(v);
    }

    let mut out = Vec::new();
    let mut singletons = Vec::new();
    for nodes in groups {
        if nodes.len() < 2 {
            singletons.extend(nodes);
            continue;
        }
        let (internal, external) = if nodes.len() == g.n() {
            (density(g)?, 0.0)
        } else {
            subgraph_densities(g, &nodes)?
        };
        let mean_score =
            nodes.iter().map(|&v| scores.scores[v]).sum::<f64>() / nodes.len() as f64;
        out.push(Patch {
            size: nodes.len(),
            nodes,
            internal_density: internal,
            external_density: external,
            mean_score,
        });
    }
    out.sort_by(|a, b| b.size.cmp(&a.size).then(a.nodes.cmp(&b.nodes)));
    singletons.sort_unstable();
    Ok(PatchReport {
        threshold,
        patches: out,
        singletons,
    })
}
