//! Shared centrality types: the measure enum, per-node score vectors and
//! their parameters.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Degree,
    Closeness,
    Betweenness,
    Katz,
    Eigenvector,
    Subgraph,
    TotalCommunicability,
}

impl Measure {
    /// Short name used in CLI flags and output file names.
    pub fn short_name(&self) -> &'static str {
        match self {
            Measure::Degree => "degree",
            Measure::Closeness => "cl",
            Measure::Betweenness => "bc",
            Measure::Katz => "katz",
            Measure::Eigenvector => "ec",
            Measure::Subgraph => "sub",
            Measure::TotalCommunicability => "tc",
        }
    }

    pub fn parse(name: &str) -> Result<Measure> {
        match name.to_ascii_lowercase().as_str() {
            "degree" | "deg" => Ok(Measure::Degree),
            "cl" | "closeness" => Ok(Measure::Closeness),
            "bc" | "betweenness" => Ok(Measure::Betweenness),
            "katz" | "kc" => Ok(Measure::Katz),
            "ec" | "eigenvector" => Ok(Measure::Eigenvector),
            "sub" | "subgraph" => Ok(Measure::Subgraph),
            "tc" | "total_communicability" | "total-communicability" => {
                Ok(Measure::TotalCommunicability)
            }
            other => Err(Error::Param(format!("unknown measure {other:?}"))),
        }
    }
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

/// Parameters a score vector was computed with.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CentralityParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Scores have been divided by the frame's edge count.
    #[serde(default)]
    pub normalized_by_edges: bool,
    /// Eigenvector centrality was computed per connected component because
    /// the graph was not connected.
    #[serde(default)]
    pub per_component: bool,
}

/// Per-node scores for one measure on one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
    pub params: CentralityParams,
    /// Edge count of the graph the scores came from; feeds the
    /// per-edge normalization of pooled distributions.
    pub edge_count: usize,
}

impl CentralityVector {
    pub fn new(measure: Measure, scores: Vec<f64>, params: CentralityParams, m: usize) -> Self {
        debug_assert!(scores.iter().all(|s| s.is_finite()));
        CentralityVector {
            measure,
            scores,
            params,
            edge_count: m,
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Explicit output normalization: scores divided by the edge count m.
    /// Never applied implicitly; the flag records that it happened.
    pub fn normalized_by_edges(&self) -> Result<CentralityVector> {
        if self.params.normalized_by_edges {
            return Err(Error::Param("scores already normalized by edges".into()));
        }
        if self.edge_count == 0 {
            return Err(Error::Param(
                "cannot normalize by edges: graph has no edges".into(),
            ));
        }
        let m = self.edge_count as f64;
        Ok(CentralityVector {
            measure: self.measure,
            scores: self.scores.iter().map(|s| s / m).collect(),
            params: CentralityParams {
                normalized_by_edges: true,
                ..self.params
            },
            edge_count: self.edge_count,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measure_parsing_round_trips() {
        for m in [
            Measure::Degree,
            Measure::Closeness,
            Measure::Betweenness,
            Measure::Katz,
            Measure::Eigenvector,
            Measure::Subgraph,
            Measure::TotalCommunicability,
        ] {
            assert_eq!(Measure::parse(m.short_name()).unwrap(), m);
        }
        assert!(Measure::parse("bogus").is_err());
    }

    #[test]
    fn edge_normalization_is_explicit_and_single() {
        let v = CentralityVector::new(
            Measure::Degree,
            vec![10.0, 20.0],
            CentralityParams::default(),
            10,
        );
        let n = v.normalized_by_edges().unwrap();
        assert_eq!(n.scores, vec![1.0, 2.0]);
        assert!(n.params.normalized_by_edges);
        assert!(n.normalized_by_edges().is_err());
    }
}
