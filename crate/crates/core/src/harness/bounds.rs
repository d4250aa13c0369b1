// SPDX-License-Identifier: Apache-2.0

use serde::{Deserialize, Serialize};

use crate::estimation::{expected_burned, expected_degree};
use crate::generators::{generate, ModelKind, ModelParams};
use crate::stochastic::realization_seed;

use super::output::{csv_document, fmt_opt, json_document, Provenance};
use super::{check_grid, valid_p, Execution, HarnessError, Summary};

pub const BOUNDS_CSV_HEADER: &str = "p,q,n,realizations,failed,burned_mean,burned_se,burned_bound,\
burned_within,degree_mean,degree_se,degree_bound,degree_within";

fn default_realizations() -> usize {
    100
}

/// CIT ensembles compared against the closed-form bounds. Two slices are
/// run: `p_grid` at fixed `q`, and `q_grid` at fixed `p_fixed`. Each is
/// repeated for every network size in `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    pub p_grid: Vec<f64>,
    pub q: f64,
    #[serde(default)]
    pub p_fixed: Option<f64>,
    #[serde(default)]
    pub q_grid: Vec<f64>,
    pub n: Vec<usize>,
    #[serde(default = "default_realizations")]
    pub realizations: usize,
    #[serde(default)]
    pub base_seed: u64,
}

impl BoundsSpec {
    pub fn from_config(text: &str) -> Result<Self, HarnessError> {
        let spec: Self = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let open_q = |q: f64| q > 0.0 && q < 1.0;
        check_grid("p", &self.p_grid, valid_p)?;
        check_grid("q", &[self.q], open_q)?;
        if let Some(p) = self.p_fixed {
            check_grid("p_fixed", &[p], valid_p)?;
            check_grid("q", &self.q_grid, open_q)?;
        }
        if self.n.is_empty() || self.n.iter().any(|&n| n < 2) {
            return Err(HarnessError::Config(
                "n list must be non-empty, each n ≥ 2".into(),
            ));
        }
        if self.realizations == 0 {
            return Err(HarnessError::Config(
                "realizations must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// `(p, q, n)` in output order; duplicates between the slices are kept
    /// once.
    pub fn points(&self) -> Vec<(f64, f64, usize)> {
        let mut pq: Vec<(f64, f64)> = self.p_grid.iter().map(|&p| (p, self.q)).collect();
        if let Some(p) = self.p_fixed {
            for &q in &self.q_grid {
                if !pq.contains(&(p, q)) {
                    pq.push((p, q));
                }
            }
        }
        let mut out = Vec::new();
        for &n in &self.n {
            out.extend(pq.iter().map(|&(p, q)| (p, q, n)));
        }
        out
    }

    pub fn provenance(&self) -> Provenance {
        let mut prov = Provenance::new("bounds");
        prov.set("model", "cit")
            .set_list("p", &self.p_grid)
            .set("q", self.q)
            .set_list("q_grid", &self.q_grid)
            .set("p_fixed", fmt_opt(self.p_fixed))
            .set_list("n", &self.n)
            .set("realizations", self.realizations)
            .set("base_seed", self.base_seed)
            .set("within_rule", "mean <= bound + 2 standard errors");
        prov
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRow {
    pub p: f64,
    pub q: f64,
    pub n: usize,
    pub realizations: usize,
    pub failed: usize,
    /// Burned nodes per episode, averaged per realization, then over the
    /// ensemble.
    pub burned_mean: Option<f64>,
    pub burned_se: Option<f64>,
    pub burned_bound: f64,
    pub burned_within: Option<bool>,
    pub degree_mean: Option<f64>,
    pub degree_se: Option<f64>,
    pub degree_bound: f64,
    pub degree_within: Option<bool>,
}

impl BoundsRow {
    pub fn to_csv_row(&self) -> String {
        let flag = |b: Option<bool>| b.map_or("NA".to_string(), |b| b.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.p,
            self.q,
            self.n,
            self.realizations,
            self.failed,
            fmt_opt(self.burned_mean),
            fmt_opt(self.burned_se),
            self.burned_bound,
            flag(self.burned_within),
            fmt_opt(self.degree_mean),
            fmt_opt(self.degree_se),
            self.degree_bound,
            flag(self.degree_within)
        )
    }
}

pub fn bounds_csv(prov: &Provenance, rows: &[BoundsRow]) -> String {
    let lines: Vec<String> = rows.iter().map(BoundsRow::to_csv_row).collect();
    csv_document(prov, BOUNDS_CSV_HEADER, &lines)
}

pub fn bounds_json(prov: &Provenance, rows: &[BoundsRow]) -> Result<String, serde_json::Error> {
    json_document(prov, rows)
}

/// Measures mean burned-per-episode and mean degree of CIT ensembles next
/// to `expected_burned(p)` and `expected_degree(p, q)`.
pub fn run_bounds_experiment(
    spec: &BoundsSpec,
    exec: Execution,
) -> Result<Vec<BoundsRow>, HarnessError> {
    spec.validate()?;
    let points = spec.points();
    let reps = spec.realizations;
    let outcomes = exec.map(points.len() * reps, |job| {
        let (p, q, n) = points[job / reps];
        let seed = realization_seed(spec.base_seed, (job % reps) as u64);
        generate(&ModelParams::new(ModelKind::Cit, n, p, q, seed))
            .map(|(g, log)| (log.burned_per_episode(), g.mean_degree()))
            .ok()
    });

    let mut rows = Vec::with_capacity(points.len());
    for (i, &(p, q, n)) in points.iter().enumerate() {
        let ok: Vec<(f64, f64)> = outcomes[i * reps..(i + 1) * reps]
            .iter()
            .flatten()
            .copied()
            .collect();
        let burned = Summary::of(&ok.iter().map(|v| v.0).collect::<Vec<_>>());
        let degree = Summary::of(&ok.iter().map(|v| v.1).collect::<Vec<_>>());
        let burned_bound = expected_burned(p)?;
        let degree_bound = expected_degree(p, q)?;
        let within = |s: Option<Summary>, b: f64| s.map(|s| s.mean <= b + 2.0 * s.std_error);
        rows.push(BoundsRow {
            p,
            q,
            n,
            realizations: ok.len(),
            failed: reps - ok.len(),
            burned_mean: burned.map(|s| s.mean),
            burned_se: burned.map(|s| s.std_error),
            burned_bound,
            burned_within: within(burned, burned_bound),
            degree_mean: degree.map(|s| s.mean),
            degree_se: degree.map(|s| s.std_error),
            degree_bound,
            degree_within: within(degree, degree_bound),
        });
    }
    Ok(rows)
}
