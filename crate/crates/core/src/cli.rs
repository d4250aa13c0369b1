// SPDX-License-Identifier: Apache-2.0

//! Command line front end. Exit codes: 0 success, 1 runtime error,
//! 2 usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::estimation::{fit_cit, fit_ff, FitResult};
use crate::generators::{generate, ModelKind, ModelParams};
use crate::graph::EdgeList;
use crate::harness::{
    bounds_csv, bounds_json, cora_comparison, run_bounds_experiment, run_sweep, BoundsSpec,
    CoraOptions, Execution, FfFit, Format, HarnessError, Provenance, SweepSpec,
};
use crate::metrics::{Metric, MetricsReport, ReportOptions, REPORT_CSV_HEADER};

#[derive(Debug, Parser)]
#[command(
    name = "citenet",
    version,
    about = "Citation network models and statistics"
)]
struct Cli {
    /// Seed for generation and community search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file (directory for `cora`); stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Grow one network and write it as an edge list.
    Generate(GenerateArgs),
    /// Statistics of an edge list.
    Stats(StatsArgs),
    /// Run a parameter sweep from a TOML config.
    Sweep {
        config: PathBuf,
        /// Run realizations on one thread.
        #[arg(long)]
        serial: bool,
    },
    /// Compare CIT ensembles with the closed-form bounds.
    Bounds(BoundsArgs),
    /// Fit the burning probability to a mean degree.
    Fit {
        #[arg(long)]
        degree: f64,
        #[arg(long, default_value_t = 0.593)]
        q: f64,
        #[arg(long, default_value_t = ModelKind::Cit)]
        model: ModelKind,
    },
    /// Compare a citation network with fitted CIT and FF ensembles.
    Cora(CoraArgs),
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// TOML file with model, n, p, q and seed; flags are ignored when set.
    #[arg(long, conflicts_with_all = ["model", "n", "p", "q"])]
    config: Option<PathBuf>,
    #[arg(long, required_unless_present = "config")]
    model: Option<ModelKind>,
    #[arg(long, required_unless_present = "config")]
    n: Option<usize>,
    #[arg(long, required_unless_present = "config")]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Comma-separated metrics for the report line.
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<Metric>,
}

#[derive(Debug, Args)]
struct StatsArgs {
    input: PathBuf,
    /// Restrict to the largest connected component.
    #[arg(long)]
    largest: bool,
    #[arg(long, default_value_t = 2)]
    k_min: u64,
    #[arg(long, value_delimiter = ',')]
    metrics: Vec<Metric>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    /// TOML file; replaces all other flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3, 0.4])]
    p_grid: Vec<f64>,
    #[arg(long, default_value_t = 0.75)]
    q: f64,
    #[arg(long)]
    p_fixed: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    q_grid: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1000])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    realizations: usize,
}

#[derive(Debug, Args)]
struct CoraArgs {
    input: PathBuf,
    #[arg(long, default_value_t = 0.593)]
    q: f64,
    #[arg(long, default_value_t = 100)]
    realizations: usize,
    #[arg(long, default_value_t = 2)]
    k_min: u64,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Fit FF by the closed-form degree bound instead of calibrating on
    /// simulated ensembles.
    #[arg(long)]
    ff_closed_form: bool,
    /// Realizations per step of the FF calibration.
    #[arg(long, default_value_t = 4)]
    calibration_realizations: usize,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn run(cli: &Cli) -> Result<(), HarnessError> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(cli, a),
        Command::Stats(a) => cmd_stats(cli, a),
        Command::Sweep { config, serial } => {
            let spec = SweepSpec::from_config(&fs::read_to_string(config)?)?;
            let exec = if *serial {
                Execution::Serial
            } else {
                Execution::Parallel
            };
            let res = run_sweep(&spec, exec)?;
            let mut prov_note = res.clone();
            prov_note.provenance.set("config", config.display());
            emit(
                cli.out.as_deref(),
                &match cli.format {
                    Format::Csv => prov_note.to_csv(),
                    Format::Json => prov_note.to_json()?,
                },
            )
        }
        Command::Bounds(a) => cmd_bounds(cli, a),
        Command::Fit { degree, q, model } => cmd_fit(cli, *degree, *q, *model),
        Command::Cora(a) => cmd_cora(cli, a),
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn report_options(metrics: &[Metric], seed: u64, k_min: u64) -> ReportOptions {
    ReportOptions {
        metrics: if metrics.is_empty() {
            Metric::ALL.to_vec()
        } else {
            metrics.to_vec()
        },
        seed,
        k_min,
    }
}

fn report_text(
    format: Format,
    prov: &Provenance,
    report: &MetricsReport,
) -> Result<String, HarnessError> {
    Ok(match format {
        Format::Csv => format!(
            "{}{REPORT_CSV_HEADER}\n{}\n",
            prov.header(),
            report.to_csv_row()
        ),
        Format::Json => {
            let v = serde_json::json!({ "provenance": prov, "report": report });
            serde_json::to_string(&v)? + "\n"
        }
    })
}

fn cmd_generate(cli: &Cli, a: &GenerateArgs) -> Result<(), HarnessError> {
    let params = match &a.config {
        Some(path) => ModelParams::from_config(&fs::read_to_string(path)?)?,
        None => ModelParams::new(
            a.model.expect("required by clap"),
            a.n.expect("required by clap"),
            a.p.expect("required by clap"),
            a.q.unwrap_or(0.0),
            cli.seed,
        ),
    };
    let (g, log) = generate(&params)?;

    let mut prov = Provenance::new("generate");
    prov.set("model", params.kind.as_str())
        .set("n", params.n)
        .set("p", params.p)
        .set(
            "q",
            if params.kind.uses_q() {
                params.q.to_string()
            } else {
                "NA".into()
            },
        )
        .set("seed", params.seed)
        .set("realizations", 1)
        .set("episodes", log.episodes)
        .set("isolated_discards", log.isolated_discards);
    let edges = format!("{}{}", prov.header(), g.to_edge_list());

    let report = MetricsReport::compute(&g, &report_options(&a.metrics, params.seed, 2));
    let line = match cli.format {
        Format::Csv => format!("{REPORT_CSV_HEADER}\n{}\n", report.to_csv_row()),
        Format::Json => serde_json::to_string(&report)? + "\n",
    };
    match &cli.out {
        Some(path) => {
            fs::write(path, edges)?;
            print!("{line}");
        }
        None => {
            print!("{edges}");
            eprint!("{line}");
        }
    }
    Ok(())
}

fn cmd_stats(cli: &Cli, a: &StatsArgs) -> Result<(), HarnessError> {
    let parsed = EdgeList::parse(&fs::read_to_string(&a.input)?)?;
    let g = if a.largest {
        parsed.graph.largest_component()?
    } else {
        parsed.graph.clone()
    };
    let mut prov = Provenance::new("stats");
    prov.set("input", a.input.display())
        .set("largest_component", a.largest)
        .set("dropped_duplicates", parsed.dropped_duplicates)
        .set("dropped_self_loops", parsed.dropped_self_loops)
        .set("seed", cli.seed)
        .set("k_min", a.k_min);
    let report = MetricsReport::compute(&g, &report_options(&a.metrics, cli.seed, a.k_min));
    emit(
        cli.out.as_deref(),
        &report_text(cli.format, &prov, &report)?,
    )
}

fn cmd_bounds(cli: &Cli, a: &BoundsArgs) -> Result<(), HarnessError> {
    let spec = match &a.config {
        Some(path) => BoundsSpec::from_config(&fs::read_to_string(path)?)?,
        None => BoundsSpec {
            p_grid: a.p_grid.clone(),
            q: a.q,
            p_fixed: a.p_fixed,
            q_grid: a.q_grid.clone(),
            n: a.n.clone(),
            realizations: a.realizations,
            base_seed: cli.seed,
        },
    };
    let rows = run_bounds_experiment(&spec, Execution::Parallel)?;
    let prov = spec.provenance();
    let text = match cli.format {
        Format::Csv => bounds_csv(&prov, &rows),
        Format::Json => bounds_json(&prov, &rows)?,
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_fit(cli: &Cli, degree: f64, q: f64, model: ModelKind) -> Result<(), HarnessError> {
    let fit: FitResult = match model {
        ModelKind::Ff => fit_ff(degree)?,
        ModelKind::Cit => fit_cit(degree, q)?,
        other => {
            return Err(HarnessError::Config(format!(
                "no degree fit for {other}; use cit or ff"
            )))
        }
    };
    let mut prov = Provenance::new("fit");
    prov.set("model", model.as_str()).set("degree", degree);
    let text = match cli.format {
        Format::Csv => format!(
            "{}model,p_hat,q,v_bar,k_pred,read_fraction\n{},{},{},{},{},{}\n",
            prov.header(),
            model.as_str(),
            fit.p_hat,
            crate::harness::fmt_opt(fit.q_fixed),
            fit.v_bar,
            fit.k_pred,
            fit.read_fraction
        ),
        Format::Json => {
            serde_json::to_string(&serde_json::json!({ "provenance": prov, "fit": fit }))? + "\n"
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_cora(cli: &Cli, a: &CoraArgs) -> Result<(), HarnessError> {
    let opts = CoraOptions {
        q: a.q,
        realizations: a.realizations,
        base_seed: cli.seed,
        k_min: a.k_min,
        bins: a.bins,
        ff_fit: if a.ff_closed_form {
            FfFit::ClosedForm
        } else {
            FfFit::Calibrated {
                realizations: a.calibration_realizations,
            }
        },
        ..CoraOptions::default()
    };
    let data = EdgeList::parse(&fs::read_to_string(&a.input)?)?;
    let mut report = cora_comparison(&data, &opts)?;
    report.provenance.set("input", a.input.display());
    for f in &report.fits {
        if let Some(e) = &f.error {
            eprintln!("warning: {} fit failed: {e}", f.model);
        }
    }
    match (&cli.out, cli.format) {
        (None, Format::Csv) => print!("{}", report.table_csv()),
        (None, Format::Json) => print!("{}", report.to_json()?),
        (Some(dir), format) => {
            fs::create_dir_all(dir)?;
            match format {
                Format::Csv => {
                    fs::write(dir.join("table.csv"), report.table_csv())?;
                    fs::write(dir.join("degree_histogram.csv"), report.histogram_csv())?;
                    fs::write(dir.join("neighbor_degree.csv"), report.curve_csv())?;
                }
                Format::Json => fs::write(dir.join("report.json"), report.to_json()?)?,
            }
        }
    }
    Ok(())
}
