// SPDX-License-Identifier: Apache-2.0

//! Citation-dynamics random graph models and the statistics used to compare
//! them against real citation networks.
//!
//! * [`generators`] grows networks under the FF, BTF, CPY and CIT models.
//! * [`metrics`] computes degree mixing, clustering, mean distance,
//!   modularity and the power-law exponent of a network.
//! * [`estimation`] evaluates the closed-form bounds on ambassadors and mean
//!   degree, and inverts them to fit the burning probability.
//! * [`harness`] runs seeded ensembles and parameter sweeps and writes CSV
//!   and JSON reports; [`cli`] exposes all of it as a command line tool.

pub mod cli;
pub mod estimation;
pub mod generators;
pub mod graph;
pub mod harness;
pub mod metrics;
pub mod stochastic;

pub use estimation::{estimate_p, expected_burned, expected_degree, read_fraction, FitResult};
pub use generators::{generate, GenerationLog, ModelKind, ModelParams};
pub use graph::{EdgeList, Graph, NodeId};
pub use metrics::{Metric, MetricsReport, ReportOptions};
pub use stochastic::SeededRng;
