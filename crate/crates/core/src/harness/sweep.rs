// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::generators::{generate, ModelKind, ModelParams};
use crate::metrics::{Metric, MetricsReport, ReportOptions};
use crate::stochastic::realization_seed;

use super::output::{csv_document, fmt_opt, json_document, Provenance};
use super::{check_grid, valid_p, valid_q, Execution, HarnessError, Summary};

pub const SWEEP_CSV_HEADER: &str = "model,p,q,n,metric,mean,std_dev,realizations,skipped,failed";

fn default_realizations() -> usize {
    100
}

fn default_metrics() -> Vec<Metric> {
    Metric::ALL.to_vec()
}

fn default_k_min() -> u64 {
    2
}

/// A grid of model parameters, read from TOML:
///
/// ```toml
/// models = ["cit", "ff"]
/// p = [0.1, 0.2, 0.3]
/// q = [0.75]
/// n = 1000
/// realizations = 100
/// base_seed = 7
/// metrics = ["mixing", "modularity"]
/// ```
///
/// `q` is ignored for FF and may be omitted when only FF is swept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub models: Vec<ModelKind>,
    pub p: Vec<f64>,
    #[serde(default)]
    pub q: Vec<f64>,
    pub n: usize,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    /// Lower cutoff for the power-law fit.
    #[serde(default = "default_k_min")]
    pub k_min: u64,
}

impl SweepSpec {
    pub fn from_config(text: &str) -> Result<Self, HarnessError> {
        let spec: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.models.is_empty() {
            return Err(HarnessError::Config("no models".into()));
        }
        check_grid("p", &self.p, valid_p)?;
        if self.models.iter().any(|m| m.uses_q()) {
            check_grid("q", &self.q, valid_q)?;
        }
        if self.n < 2 {
            return Err(HarnessError::Config(format!("n={} below 2", self.n)));
        }
        if self.realizations == 0 {
            return Err(HarnessError::Config(
                "realizations must be at least 1".into(),
            ));
        }
        if self.metrics.is_empty() {
            return Err(HarnessError::Config("no metrics".into()));
        }
        Ok(())
    }

    /// `(model, p, q)` for every grid point; FF gets a single `q = None`.
    pub fn points(&self) -> Vec<(ModelKind, f64, Option<f64>)> {
        let mut out = Vec::new();
        for &kind in &self.models {
            for &p in &self.p {
                if kind.uses_q() {
                    out.extend(self.q.iter().map(|&q| (kind, p, Some(q))));
                } else {
                    out.push((kind, p, None));
                }
            }
        }
        out
    }

    pub fn provenance(&self) -> Provenance {
        let mut prov = Provenance::new("sweep");
        prov.set_list("models", &self.models)
            .set_list("p", &self.p)
            .set_list("q", &self.q)
            .set("n", self.n)
            .set("realizations", self.realizations)
            .set("base_seed", self.base_seed)
            .set_list("metrics", &self.metrics)
            .set("k_min", self.k_min)
            .set("seed_rule", "splitmix64(base_seed ^ splitmix64(index))");
        prov
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub model: ModelKind,
    pub p: f64,
    pub q: Option<f64>,
    pub n: usize,
    pub metric: Metric,
    pub mean: Option<f64>,
    pub std_dev: Option<f64>,
    /// Realizations that produced a value.
    pub realizations: usize,
    /// Realizations where the metric was undefined.
    pub skipped: usize,
    /// Realizations whose generation failed.
    pub failed: usize,
}

impl SweepRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.model.as_str(),
            self.p,
            fmt_opt(self.q),
            self.n,
            self.metric,
            fmt_opt(self.mean),
            fmt_opt(self.std_dev),
            self.realizations,
            self.skipped,
            self.failed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub provenance: Provenance,
    pub rows: Vec<SweepRow>,
    /// First generation error per failing grid point.
    pub errors: Vec<String>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let rows: Vec<String> = self.rows.iter().map(SweepRow::to_csv_row).collect();
        let mut prov = self.provenance.clone();
        for (i, e) in self.errors.iter().enumerate() {
            prov.set(&format!("error{i}"), e);
        }
        csv_document(&prov, SWEEP_CSV_HEADER, &rows)
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        json_document(&self.provenance, &self.rows)
    }

    pub fn row(
        &self,
        model: ModelKind,
        p: f64,
        q: Option<f64>,
        metric: Metric,
    ) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.model == model && r.p == p && r.q == q && r.metric == metric)
    }
}

/// Generates `spec.realizations` networks at every grid point and
/// aggregates the requested metrics. Generation failures are counted per
/// grid point and do not stop the sweep.
pub fn run_sweep(spec: &SweepSpec, exec: Execution) -> Result<SweepResult, HarnessError> {
    spec.validate()?;
    let points = spec.points();
    let reps = spec.realizations;
    let outcomes = exec.map(points.len() * reps, |job| {
        let (kind, p, q) = points[job / reps];
        let seed = realization_seed(spec.base_seed, (job % reps) as u64);
        let params = ModelParams::new(kind, spec.n, p, q.unwrap_or(0.0), seed);
        generate(&params).map(|(g, _)| {
            let opts = ReportOptions {
                metrics: spec.metrics.clone(),
                seed,
                k_min: spec.k_min,
            };
            MetricsReport::compute(&g, &opts)
        })
    });

    let mut rows = Vec::new();
    let mut errors = Vec::new();
    for (i, &(model, p, q)) in points.iter().enumerate() {
        let chunk = &outcomes[i * reps..(i + 1) * reps];
        let failed = chunk.iter().filter(|o| o.is_err()).count();
        if let Some(Err(e)) = chunk.iter().find(|o| o.is_err()) {
            errors.push(e.to_string());
        }
        for &metric in &spec.metrics {
            let values: Vec<f64> = chunk
                .iter()
                .filter_map(|o| o.as_ref().ok())
                .filter_map(|r| r.get(metric))
                .collect();
            let summary = Summary::of(&values);
            rows.push(SweepRow {
                model,
                p,
                q,
                n: spec.n,
                metric,
                mean: summary.map(|s| s.mean),
                std_dev: summary.map(|s| s.std_dev),
                realizations: values.len(),
                skipped: reps - failed - values.len(),
                failed,
            });
        }
    }
    Ok(SweepResult {
        provenance: spec.provenance(),
        rows,
        errors,
    })
}
