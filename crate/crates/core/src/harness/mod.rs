// SPDX-License-Identifier: Apache-2.0

//! Seeded ensembles, parameter sweeps and the Cora comparison.
//!
//! Every realization draws its seed from `(base_seed, realization index)`,
//! so results do not depend on scheduling and grid points share random
//! numbers.

mod bounds;
mod cora;
mod output;
mod sweep;

use serde::Serialize;
use thiserror::Error;

use crate::estimation::EstimationError;
use crate::generators::GenerateError;
use crate::graph::GraphError;
use crate::metrics::MetricError;

pub use bounds::{
    bounds_csv, bounds_json, run_bounds_experiment, BoundsRow, BoundsSpec, BOUNDS_CSV_HEADER,
};
pub use cora::{
    calibrate_ff, cora_comparison, run_cora_experiment, CoraOptions, CoraReport, CurvePoint, FfFit,
    FitRow, HistogramRow, TableRow, CORA_CSV_HEADER,
};
pub use output::{fmt_opt, Format, Provenance};
pub use sweep::{run_sweep, SweepResult, SweepRow, SweepSpec, SWEEP_CSV_HEADER};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// How the realizations of an experiment are scheduled. Both give
/// identical results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

impl Execution {
    /// Maps `f` over `0..len`, keeping index order.
    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        use rayon::prelude::*;
        match self {
            Execution::Serial => (0..len).map(f).collect(),
            Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        }
    }
}

/// Mean, sample standard deviation and standard error of a set of values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub std_dev: f64,
    pub std_error: f64,
    pub count: usize,
}

impl Summary {
    /// `None` for an empty slice. A single value has zero spread.
    pub fn of(values: &[f64]) -> Option<Self> {
        let count = values.len();
        if count == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / count as f64;
        let std_dev = if count > 1 {
            let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Self {
            mean,
            std_dev,
            std_error: std_dev / (count as f64).sqrt(),
            count,
        })
    }
}

fn check_grid(name: &str, values: &[f64], valid: impl Fn(f64) -> bool) -> Result<(), HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Config(format!("{name} grid is empty")));
    }
    match values.iter().find(|&&v| !valid(v)) {
        Some(v) => Err(HarnessError::Config(format!("{name}={v} out of range"))),
        None => Ok(()),
    }
}

fn valid_p(p: f64) -> bool {
    (0.0..0.5).contains(&p)
}

fn valid_q(q: f64) -> bool {
    (0.0..1.0).contains(&q)
}
