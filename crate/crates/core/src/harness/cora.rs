// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::estimation::{
    expected_burned, expected_degree_ff, fit_cit, fit_ff, read_fraction, FitResult,
};
use crate::generators::{generate, ModelKind, ModelParams};
use crate::graph::{EdgeList, Graph};
use crate::metrics::{
    degree_histogram, degree_mixing, fit_power_law, fit_power_law_scan, mean_neighbor_degree_curve,
    MIN_TAIL,
};
use crate::stochastic::realization_seed;

use super::output::{csv_document, fmt_opt, json_document, Provenance};
use super::{Execution, HarnessError, Summary};

pub const CORA_CSV_HEADER: &str = "model,p,q,n,realizations,failed,m,m_sd,mean_degree,\
mean_degree_sd,mixing,mixing_sd,alpha,alpha_scan,alpha_scan_k_min";

const DATA_LABEL: &str = "data";

#[derive(Debug, Clone)]
pub struct CoraOptions {
    pub q: f64,
    pub realizations: usize,
    pub base_seed: u64,
    /// Cutoff of the fixed-`k_min` power-law fit.
    pub k_min: u64,
    /// Minimum tail size of the cutoff-scanning fit.
    pub scan_min_tail: usize,
    /// Equal-count bins of the neighbor-degree curve.
    pub bins: usize,
    pub execution: Execution,
    pub ff_fit: FfFit,
}

/// How the FF burning probability is matched to the data degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FfFit {
    /// Invert `2 (1-p)/(1-2p) = k`. An upper bound on the FF degree, so
    /// the fitted ensembles come out sparser than the target.
    ClosedForm,
    /// Bisection on `p` against the simulated mean degree of this many
    /// realizations, starting from the closed-form value.
    Calibrated { realizations: usize },
}

impl Default for CoraOptions {
    fn default() -> Self {
        Self {
            q: 0.593,
            realizations: 100,
            base_seed: 0,
            k_min: 2,
            scan_min_tail: 100,
            bins: 20,
            execution: Execution::Parallel,
            ff_fit: FfFit::Calibrated { realizations: 4 },
        }
    }
}

/// Outcome of fitting one model to the data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub model: ModelKind,
    pub method: &'static str,
    pub fit: Option<FitResult>,
    /// Inverse of the closed-form bound, when it differs from `fit.p_hat`.
    pub p_closed_form: Option<f64>,
    pub error: Option<String>,
}

const CALIBRATION_STEPS: usize = 14;
const P_CEILING: f64 = 0.49;

/// Mean degree of FF networks at `p`, averaged over `reps` seeds shared
/// across calls.
fn ff_degree(n: usize, p: f64, reps: usize, base_seed: u64, exec: Execution) -> Option<f64> {
    let ks = exec.map(reps, |i| {
        let seed = realization_seed(base_seed ^ 0x0ff0_ca1b, i as u64);
        generate(&ModelParams::new(ModelKind::Ff, n, p, 0.0, seed)).map(|(g, _)| g.mean_degree())
    });
    let ks: Vec<f64> = ks.into_iter().flatten().collect();
    Summary::of(&ks).map(|s| s.mean)
}

/// Bisection of the simulated FF mean degree on `[p0, P_CEILING]`.
pub fn calibrate_ff(
    k_target: f64,
    n: usize,
    reps: usize,
    base_seed: u64,
    exec: Execution,
) -> Result<FitResult, HarnessError> {
    let closed = fit_ff(k_target)?;
    let degree = |p| {
        ff_degree(n, p, reps, base_seed, exec)
            .ok_or_else(|| HarnessError::Config(format!("FF generation failed at p={p}")))
    };
    let (mut lo, mut hi) = (closed.p_hat, P_CEILING);
    if degree(hi)? < k_target {
        return Err(HarnessError::Config(format!(
            "FF mean degree at p={P_CEILING} stays below {k_target}"
        )));
    }
    if degree(lo)? < k_target {
        for _ in 0..CALIBRATION_STEPS {
            let mid = 0.5 * (lo + hi);
            if degree(mid)? < k_target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    } else {
        hi = lo;
    }
    let p_hat = 0.5 * (lo + hi);
    Ok(FitResult {
        p_hat,
        q_fixed: None,
        v_bar: expected_burned(p_hat)?,
        k_pred: expected_degree_ff(p_hat)?,
        read_fraction: read_fraction(p_hat, k_target)?,
    })
}

/// One line of the comparison table; models are ensemble means.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub model: String,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub n: usize,
    pub realizations: usize,
    pub failed: usize,
    pub m: Option<f64>,
    pub m_sd: Option<f64>,
    pub mean_degree: Option<f64>,
    pub mean_degree_sd: Option<f64>,
    pub mixing: Option<f64>,
    pub mixing_sd: Option<f64>,
    /// Pooled over realizations, fixed cutoff.
    pub alpha: Option<f64>,
    /// Pooled over realizations, cutoff chosen by KS distance.
    pub alpha_scan: Option<f64>,
    pub alpha_scan_k_min: Option<u64>,
}

impl TableRow {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.model,
            fmt_opt(self.p),
            fmt_opt(self.q),
            self.n,
            self.realizations,
            self.failed,
            fmt_opt(self.m),
            fmt_opt(self.m_sd),
            fmt_opt(self.mean_degree),
            fmt_opt(self.mean_degree_sd),
            fmt_opt(self.mixing),
            fmt_opt(self.mixing_sd),
            fmt_opt(self.alpha),
            fmt_opt(self.alpha_scan),
            self.alpha_scan_k_min.map_or("NA".into(), |k| k.to_string()),
        )
    }
}

/// Degree distribution, counts pooled over realizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramRow {
    pub model: String,
    pub degree: usize,
    pub count: usize,
    pub probability: f64,
}

/// Neighbor-degree curve, bins averaged over realizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub model: String,
    pub bin: usize,
    pub degree: f64,
    pub neighbor_degree: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoraReport {
    pub provenance: Provenance,
    pub fits: Vec<FitRow>,
    pub table: Vec<TableRow>,
    pub histogram: Vec<HistogramRow>,
    pub curve: Vec<CurvePoint>,
}

impl CoraReport {
    pub fn table_csv(&self) -> String {
        let rows: Vec<String> = self.table.iter().map(TableRow::to_csv_row).collect();
        csv_document(&self.provenance, CORA_CSV_HEADER, &rows)
    }

    pub fn histogram_csv(&self) -> String {
        let rows: Vec<String> = self
            .histogram
            .iter()
            .map(|h| format!("{},{},{},{}", h.model, h.degree, h.count, h.probability))
            .collect();
        csv_document(&self.provenance, "model,degree,count,probability", &rows)
    }

    pub fn curve_csv(&self) -> String {
        let rows: Vec<String> = self
            .curve
            .iter()
            .map(|c| {
                format!(
                    "{},{},{},{},{}",
                    c.model, c.bin, c.degree, c.neighbor_degree, c.nodes
                )
            })
            .collect();
        csv_document(
            &self.provenance,
            "model,bin,degree,neighbor_degree,nodes",
            &rows,
        )
    }

    pub fn table_json(&self) -> Result<String, serde_json::Error> {
        json_document(&self.provenance, &self.table)
    }

    pub fn to_json(&self) -> Result<String, serde_json::Error> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn row(&self, model: &str) -> Option<&TableRow> {
        self.table.iter().find(|r| r.model == model)
    }
}

/// Statistics of a set of networks sharing a label.
struct Ensemble {
    graphs: Vec<Graph>,
    failed: usize,
}

impl Ensemble {
    fn table_row(
        &self,
        model: String,
        p: Option<f64>,
        q: Option<f64>,
        n: usize,
        opts: &CoraOptions,
    ) -> TableRow {
        let summary = |f: &dyn Fn(&Graph) -> Option<f64>| {
            Summary::of(&self.graphs.iter().filter_map(f).collect::<Vec<_>>())
        };
        let m = summary(&|g| Some(g.edge_count() as f64));
        let k = summary(&|g| Some(g.mean_degree()));
        let r = summary(&|g| degree_mixing(g).ok());
        let degrees: Vec<u64> = self
            .graphs
            .iter()
            .flat_map(|g| g.degrees())
            .map(|d| d as u64)
            .collect();
        let scan = fit_power_law_scan(&degrees, opts.scan_min_tail).ok();
        TableRow {
            model,
            p,
            q,
            n,
            realizations: self.graphs.len(),
            failed: self.failed,
            m: m.map(|s| s.mean),
            m_sd: m.map(|s| s.std_dev),
            mean_degree: k.map(|s| s.mean),
            mean_degree_sd: k.map(|s| s.std_dev),
            mixing: r.map(|s| s.mean),
            mixing_sd: r.map(|s| s.std_dev),
            alpha: fit_power_law(&degrees, opts.k_min).ok(),
            alpha_scan: scan.map(|f| f.alpha),
            alpha_scan_k_min: scan.map(|f| f.k_min),
        }
    }

    fn histogram(&self, model: &str) -> Vec<HistogramRow> {
        let mut pooled = BTreeMap::new();
        for g in &self.graphs {
            for (d, c) in degree_histogram(g) {
                *pooled.entry(d).or_insert(0) += c;
            }
        }
        let total: usize = pooled.values().sum();
        pooled
            .into_iter()
            .map(|(degree, count)| HistogramRow {
                model: model.to_string(),
                degree,
                count,
                probability: count as f64 / total as f64,
            })
            .collect()
    }

    fn curve(&self, model: &str, bins: usize) -> Vec<CurvePoint> {
        let mut acc: Vec<(f64, f64, usize, usize)> = Vec::new();
        for g in &self.graphs {
            let Ok(series) = mean_neighbor_degree_curve(g, bins) else {
                continue;
            };
            if acc.len() < series.bins.len() {
                acc.resize(series.bins.len(), (0.0, 0.0, 0, 0));
            }
            for (a, b) in acc.iter_mut().zip(&series.bins) {
                a.0 += b.x;
                a.1 += b.y;
                a.2 += b.count;
                a.3 += 1;
            }
        }
        acc.into_iter()
            .enumerate()
            .filter(|(_, a)| a.3 > 0)
            .map(|(bin, (x, y, nodes, k))| CurvePoint {
                model: model.to_string(),
                bin,
                degree: x / k as f64,
                neighbor_degree: y / k as f64,
                nodes,
            })
            .collect()
    }
}

/// Reads an edge list and runs [`cora_comparison`] on it.
pub fn run_cora_experiment(path: &Path, opts: &CoraOptions) -> Result<CoraReport, HarnessError> {
    let text = std::fs::read_to_string(path)?;
    let mut report = cora_comparison(&EdgeList::parse(&text)?, opts)?;
    report.provenance.set("input", path.display());
    Ok(report)
}

/// Compares the largest component of `data` with CIT and FF ensembles
/// whose burning probability is fitted to its mean degree. A model whose
/// fit has no solution is reported in `fits` and left out of the table.
pub fn cora_comparison(data: &EdgeList, opts: &CoraOptions) -> Result<CoraReport, HarnessError> {
    if !(opts.q > 0.0 && opts.q < 1.0) {
        return Err(HarnessError::Config(format!("q={} outside (0, 1)", opts.q)));
    }
    if opts.realizations == 0 || opts.bins == 0 {
        return Err(HarnessError::Config(
            "realizations and bins must be positive".into(),
        ));
    }
    let g = data.graph.largest_component()?;
    let n = g.node_count();
    let k = g.mean_degree();

    let mut prov = Provenance::new("cora");
    prov.set("n", n)
        .set("input_nodes", data.graph.node_count())
        .set("dropped_edges", data.dropped())
        .set("q", opts.q)
        .set("realizations", opts.realizations)
        .set("base_seed", opts.base_seed)
        .set("k_min", opts.k_min)
        .set("scan_min_tail", opts.scan_min_tail.max(MIN_TAIL))
        .set("bins", format!("{} equal-count", opts.bins))
        .set(
            "ff_fit",
            match opts.ff_fit {
                FfFit::ClosedForm => "closed_form".to_string(),
                FfFit::Calibrated { realizations } => format!("calibrated/{realizations}"),
            },
        );

    let observed = Ensemble {
        graphs: vec![g],
        failed: 0,
    };
    let mut table = vec![observed.table_row(DATA_LABEL.into(), None, None, n, opts)];
    let mut histogram = observed.histogram(DATA_LABEL);
    let mut curve = observed.curve(DATA_LABEL, opts.bins);

    let mut fits = Vec::new();
    for kind in [ModelKind::Ff, ModelKind::Cit] {
        let (method, fit, p_closed_form) = match (kind, opts.ff_fit) {
            (ModelKind::Cit, _) => (
                "closed_form",
                fit_cit(k, opts.q).map_err(HarnessError::from),
                None,
            ),
            (_, FfFit::ClosedForm) => ("closed_form", fit_ff(k).map_err(HarnessError::from), None),
            (_, FfFit::Calibrated { realizations }) => (
                "calibrated",
                calibrate_ff(k, n, realizations.max(1), opts.base_seed, opts.execution),
                fit_ff(k).ok().map(|f| f.p_hat),
            ),
        };
        let fit = match fit {
            Ok(f) => f,
            Err(e) => {
                fits.push(FitRow {
                    model: kind,
                    method,
                    fit: None,
                    p_closed_form,
                    error: Some(e.to_string()),
                });
                continue;
            }
        };
        fits.push(FitRow {
            model: kind,
            method,
            fit: Some(fit),
            p_closed_form,
            error: None,
        });
        prov.set(&format!("p_{}", kind.as_str()), fit.p_hat);

        let q = fit.q_fixed.unwrap_or(0.0);
        let outcomes = opts.execution.map(opts.realizations, |i| {
            let seed = realization_seed(opts.base_seed, i as u64);
            generate(&ModelParams::new(kind, n, fit.p_hat, q, seed)).map(|(g, _)| g)
        });
        let failed = outcomes.iter().filter(|o| o.is_err()).count();
        let ensemble = Ensemble {
            graphs: outcomes.into_iter().flatten().collect(),
            failed,
        };
        let label = kind.to_string();
        table.push(ensemble.table_row(label.clone(), Some(fit.p_hat), fit.q_fixed, n, opts));
        histogram.extend(ensemble.histogram(&label));
        curve.extend(ensemble.curve(&label, opts.bins));
    }

    Ok(CoraReport {
        provenance: prov,
        fits,
        table,
        histogram,
        curve,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_input_reports_fit_errors() {
        let data = EdgeList::parse("1 2\n2 3\n").unwrap();
        let report = cora_comparison(&data, &CoraOptions::default()).unwrap();
        assert_eq!(report.table.len(), 1);
        let row = report.row(DATA_LABEL).unwrap();
        assert_eq!((row.n, row.m), (3, Some(2.0)));
        assert_eq!(row.mixing, Some(-1.0));
        assert_eq!(report.fits.len(), 2);
        assert!(report
            .fits
            .iter()
            .all(|f| f.fit.is_none() && f.error.is_some()));
        assert_eq!(report.histogram.len(), 2);
        assert!(report.table_csv().contains("\ndata,NA,NA,3,1,0,2,0,"));
    }

    #[test]
    fn fitted_models_match_the_data_degree() {
        let source = generate(&ModelParams::new(ModelKind::Cit, 1500, 0.3, 0.6, 5))
            .unwrap()
            .0;
        let mut text = source.to_edge_list();
        // a stray pair outside the largest component
        text.push_str("100000 100001\n");
        let data = EdgeList::parse(&text).unwrap();
        let opts = CoraOptions {
            q: 0.6,
            realizations: 4,
            bins: 10,
            ..CoraOptions::default()
        };
        let report = cora_comparison(&data, &opts).unwrap();
        assert_eq!(report.table.len(), 3);
        let data_row = report.row(DATA_LABEL).unwrap();
        assert_eq!(data_row.n, 1500);
        let cit = report.row("CIT").unwrap();
        assert_eq!((cit.n, cit.realizations, cit.failed), (1500, 4, 0));
        let k = data_row.mean_degree.unwrap();
        // the bound is attained from below, so the ensemble is somewhat sparser
        assert!(cit.mean_degree.unwrap() < k * 1.05);
        assert!(cit.mean_degree.unwrap() > k * 0.7);
        assert!(cit.mixing.unwrap() < 0.0);
        let ff = report.row("FF").unwrap();
        assert!(ff.mixing.unwrap() > 0.0);
        assert!(
            (ff.mean_degree.unwrap() - k).abs() < 0.1 * k,
            "{ff:?} vs {k}"
        );
        let ff_fit = report
            .fits
            .iter()
            .find(|f| f.model == ModelKind::Ff)
            .unwrap();
        assert!(ff_fit.fit.unwrap().p_hat > ff_fit.p_closed_form.unwrap());
        let total: f64 = report
            .histogram
            .iter()
            .filter(|h| h.model == "CIT")
            .map(|h| h.probability)
            .sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_eq!(report.curve.iter().filter(|c| c.model == "FF").count(), 10);
        assert_eq!(report.provenance.get("input_nodes"), Some("1502"));
    }

    #[test]
    fn closed_form_ff_undershoots_the_degree() {
        let k = 7.669;
        let closed = fit_ff(k).unwrap().p_hat;
        assert!((closed - 0.425_03).abs() < 1e-4);
        let measured = ff_degree(3000, closed, 2, 1, Execution::Serial).unwrap();
        assert!(measured < 0.8 * k, "{measured}");
        let cal = calibrate_ff(k, 3000, 2, 1, Execution::Serial).unwrap();
        let reached = ff_degree(3000, cal.p_hat, 2, 1, Execution::Serial).unwrap();
        assert!((reached - k).abs() < 0.3, "p={} k={reached}", cal.p_hat);
    }

    #[test]
    fn rejects_bad_options() {
        let data = EdgeList::parse("1 2\n").unwrap();
        let opts = CoraOptions {
            q: 1.0,
            ..CoraOptions::default()
        };
        assert!(cora_comparison(&data, &opts).is_err());
    }
}
