// SPDX-License-Identifier: Apache-2.0

//! Network statistics over an immutable [`Graph`].

mod clustering;
mod community;
mod degree;
mod distance;
mod mixing;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use clustering::{clustering, transitivity, triangles_per_node};
pub use community::{louvain, modularity, Partition};
pub use degree::{
    degree_histogram, fit_power_law, fit_power_law_scan, hurwitz_zeta, mean_neighbor_degree,
    mean_neighbor_degree_curve, neighbor_degrees, power_law_alpha, power_law_alpha_approx, Bin,
    BinnedSeries, PowerLawFit, MIN_TAIL,
};
pub use distance::{
    mean_distance, mean_distance_summary, MeanDistance, EXACT_DISTANCE_LIMIT, SAMPLED_SOURCES,
};
pub use mixing::degree_mixing;

use crate::graph::Graph;
use crate::stochastic::SeededRng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricError {
    #[error("undefined: {0}")]
    Undefined(&'static str),
    #[error("graph has no edges")]
    NoEdges,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("partition covers {assigned} nodes, graph has {nodes}")]
    PartitionSize { nodes: usize, assigned: usize },
    #[error("power-law tail has {found} nodes, need at least {needed}")]
    InsufficientTail { found: usize, needed: usize },
}

/// One statistic of a [`MetricsReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[serde(rename = "n")]
    Nodes,
    #[serde(rename = "m")]
    Edges,
    MeanDegree,
    MeanNeighborDegree,
    Mixing,
    Clustering,
    MeanDistance,
    Modularity,
    Alpha,
}

impl Metric {
    pub const ALL: [Metric; 9] = [
        Metric::Nodes,
        Metric::Edges,
        Metric::MeanDegree,
        Metric::MeanNeighborDegree,
        Metric::Mixing,
        Metric::Clustering,
        Metric::MeanDistance,
        Metric::Modularity,
        Metric::Alpha,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Nodes => "n",
            Metric::Edges => "m",
            Metric::MeanDegree => "mean_degree",
            Metric::MeanNeighborDegree => "mean_neighbor_degree",
            Metric::Mixing => "mixing",
            Metric::Clustering => "clustering",
            Metric::MeanDistance => "mean_distance",
            Metric::Modularity => "modularity",
            Metric::Alpha => "alpha",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric {s:?}"))
    }
}

/// Knobs for [`MetricsReport::compute`].
#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Which optional statistics to compute; the rest are reported as null.
    pub metrics: Vec<Metric>,
    /// Seed for the community search.
    pub seed: u64,
    pub k_min: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            metrics: Metric::ALL.to_vec(),
            seed: 0,
            k_min: 2,
        }
    }
}

impl ReportOptions {
    pub fn only(metrics: &[Metric]) -> Self {
        Self {
            metrics: metrics.to_vec(),
            ..Self::default()
        }
    }

    fn wants(&self, m: Metric) -> bool {
        self.metrics.contains(&m)
    }
}

/// Statistics bundle of one network. Undefined or skipped values are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub n: usize,
    pub m: usize,
    pub mean_degree: f64,
    pub mean_neighbor_degree: Option<f64>,
    pub mixing: Option<f64>,
    pub clustering: Option<f64>,
    pub mean_distance: Option<f64>,
    pub modularity: Option<f64>,
    pub alpha: Option<f64>,
}

pub const REPORT_CSV_HEADER: &str =
    "n,m,mean_degree,mean_neighbor_degree,mixing,clustering,mean_distance,modularity,alpha";

impl MetricsReport {
    pub fn compute(g: &Graph, opts: &ReportOptions) -> Self {
        let modularity = opts.wants(Metric::Modularity).then(|| {
            let mut rng = SeededRng::new(opts.seed);
            louvain(g, &mut rng)
                .and_then(|part| modularity(g, &part))
                .ok()
        });
        Self {
            n: g.node_count(),
            m: g.edge_count(),
            mean_degree: g.mean_degree(),
            mean_neighbor_degree: opts
                .wants(Metric::MeanNeighborDegree)
                .then(|| mean_neighbor_degree(g))
                .flatten(),
            mixing: opts
                .wants(Metric::Mixing)
                .then(|| degree_mixing(g).ok())
                .flatten(),
            clustering: opts.wants(Metric::Clustering).then(|| clustering(g)),
            mean_distance: opts
                .wants(Metric::MeanDistance)
                .then(|| mean_distance(g).ok())
                .flatten(),
            modularity: modularity.flatten(),
            alpha: opts
                .wants(Metric::Alpha)
                .then(|| power_law_alpha(g, opts.k_min).ok())
                .flatten(),
        }
    }

    pub fn get(&self, metric: Metric) -> Option<f64> {
        match metric {
            Metric::Nodes => Some(self.n as f64),
            Metric::Edges => Some(self.m as f64),
            Metric::MeanDegree => Some(self.mean_degree),
            Metric::MeanNeighborDegree => self.mean_neighbor_degree,
            Metric::Mixing => self.mixing,
            Metric::Clustering => self.clustering,
            Metric::MeanDistance => self.mean_distance,
            Metric::Modularity => self.modularity,
            Metric::Alpha => self.alpha,
        }
    }

    /// One CSV row matching [`REPORT_CSV_HEADER`]; nulls are written as `NA`.
    pub fn to_csv_row(&self) -> String {
        Metric::ALL
            .iter()
            .map(|&m| match (m, self.get(m)) {
                (Metric::Nodes, _) => self.n.to_string(),
                (Metric::Edges, _) => self.m.to_string(),
                (_, Some(v)) => v.to_string(),
                (_, None) => "NA".to_string(),
            })
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn report_on_star() {
        let r = MetricsReport::compute(&star(3), &ReportOptions::default());
        assert_eq!((r.n, r.m), (4, 3));
        assert_eq!(r.mean_degree, 1.5);
        assert!((r.mixing.unwrap() + 1.0).abs() < 1e-12);
        assert_eq!(r.clustering, Some(0.0));
        assert!((r.mean_distance.unwrap() - 1.5).abs() < 1e-12);
        assert!(r.alpha.is_none());
        // (1 + 3 + 3 + 3) / 4
        assert!((r.mean_neighbor_degree.unwrap() - 2.5).abs() < 1e-12);
        assert_eq!(
            r.to_csv_row().split(',').count(),
            REPORT_CSV_HEADER.split(',').count()
        );
        assert!(r.to_csv_row().ends_with(",NA"));
    }

    #[test]
    fn undefined_values_are_null() {
        let r = MetricsReport::compute(&cycle(5), &ReportOptions::default());
        assert_eq!(r.mixing, None);
        let json = serde_json::to_value(&r).unwrap();
        assert!(json["mixing"].is_null());
    }

    #[test]
    fn skipped_metrics_are_null() {
        let r = MetricsReport::compute(&complete(4), &ReportOptions::only(&[Metric::Clustering]));
        assert_eq!(r.clustering, Some(1.0));
        assert_eq!(r.mean_distance, None);
        assert_eq!(r.modularity, None);
    }

    #[test]
    fn metric_names_round_trip() {
        for m in Metric::ALL {
            assert_eq!(m.name().parse::<Metric>().unwrap(), m);
            assert_eq!(serde_json::to_value(m).unwrap(), m.name());
        }
        assert!("betweenness".parse::<Metric>().is_err());
    }

    #[test]
    fn report_is_pure() {
        let g = crate::generators::generate(&crate::generators::ModelParams::new(
            crate::generators::ModelKind::Cit,
            400,
            0.3,
            0.7,
            8,
        ))
        .unwrap()
        .0;
        let opts = ReportOptions::default();
        assert_eq!(
            MetricsReport::compute(&g, &opts),
            MetricsReport::compute(&g, &opts)
        );
    }
}
