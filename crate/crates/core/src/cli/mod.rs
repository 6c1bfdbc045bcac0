//! Batch experiment runner behind the `horokit` binary. A JSON config
//! names one experiment; running it yields a deterministic report and,
//! for some experiments, a point cloud for plotting.

mod experiments;
mod oracle;
mod report;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::config::MetricConfig;
use crate::error::{HoroError, Result};
use crate::metric_core::Domain;

pub use report::{points_csv, read_report, Counts, ExitStatus, PointRow, Report, ReportRow, RowStatus};

pub const REPORT_SCHEMA: &str = "1";

pub fn report_schema_version() -> &'static str {
    REPORT_SCHEMA
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    HorosphereSlice,
    ClassifyBidisc,
    Equivalence,
    Impression,
    PrincipalPart,
    GromovProduct,
    DeltaEstimate,
    QuasiGeodesic,
    ClusterSet,
    DenjoyWolff,
    BidiscTopology,
    OracleSuite,
}

impl Experiment {
    pub const ALL: [Experiment; 12] = [
        Experiment::HorosphereSlice,
        Experiment::ClassifyBidisc,
        Experiment::Equivalence,
        Experiment::Impression,
        Experiment::PrincipalPart,
        Experiment::GromovProduct,
        Experiment::DeltaEstimate,
        Experiment::QuasiGeodesic,
        Experiment::ClusterSet,
        Experiment::DenjoyWolff,
        Experiment::BidiscTopology,
        Experiment::OracleSuite,
    ];

    pub fn name(self) -> String {
        serde_json::to_value(self).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
    }
}

fn default_report() -> String {
    "report.json".into()
}

fn default_points() -> Option<String> {
    Some("points.csv".into())
}

/// File names inside the output directory; `points: null` turns the
/// point cloud off.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_report")]
    pub report: String,
    #[serde(default = "default_points")]
    pub points: Option<String>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec { report: default_report(), points: default_points() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub experiment: Experiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(default)]
    pub metric: MetricConfig,
    /// Experiment-specific parameters.
    #[serde(default)]
    pub payload: Value,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> ExperimentConfig {
        ExperimentConfig {
            schema: None,
            experiment,
            domain: None,
            metric: MetricConfig::default(),
            payload: Value::Null,
            output: OutputSpec::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| HoroError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.schema {
            if s != REPORT_SCHEMA {
                return Err(HoroError::InvalidConfig(format!("unsupported schema {s}")));
            }
        }
        self.metric.validate()?;
        for name in std::iter::once(&self.output.report).chain(self.output.points.as_ref()) {
            if name.is_empty() || Path::new(name).components().count() != 1 {
                return Err(HoroError::InvalidConfig(format!("output name {name:?} must be a plain file name")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialize")
    }

    pub(crate) fn domain(&self) -> Result<Domain> {
        self.domain.clone().ok_or_else(|| HoroError::InvalidConfig(format!("{} needs a domain", self.experiment.name())))
    }
}

/// Rows and plot points produced by one unit of work.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TaskOutput {
    pub rows: Vec<ReportRow>,
    pub points: Vec<PointRow>,
}

impl TaskOutput {
    pub fn rows(rows: Vec<ReportRow>) -> TaskOutput {
        TaskOutput { rows, points: Vec::new() }
    }
}

/// An independent unit of work; executors may run tasks concurrently but
/// must return outputs in task order.
pub type Task = Box<dyn FnOnce() -> Result<TaskOutput> + Send>;

pub fn plan(cfg: &ExperimentConfig) -> Result<Vec<Task>> {
    cfg.validate()?;
    match cfg.experiment {
        Experiment::OracleSuite => oracle::plan(cfg),
        _ => experiments::plan(cfg),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub report: Report,
    pub points: Vec<PointRow>,
}

impl RunOutput {
    pub fn exit_status(&self) -> ExitStatus {
        self.report.exit_status()
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutput> {
    run_with(cfg, |tasks| tasks.into_iter().map(|t| t()).collect())
}

/// Runs the planned tasks through `exec`. Numerical failures inside a task
/// become inconclusive rows; argument and configuration errors abort.
pub fn run_with(cfg: &ExperimentConfig, exec: impl FnOnce(Vec<Task>) -> Vec<Result<TaskOutput>>) -> Result<RunOutput> {
    let tasks = plan(cfg)?;
    let mut rows = Vec::new();
    let mut points = Vec::new();
    for (i, out) in exec(tasks).into_iter().enumerate() {
        match out {
            Ok(o) => {
                rows.extend(o.rows);
                points.extend(o.points);
            }
            Err(e @ (HoroError::NonConvergent(_) | HoroError::Quadrature(_))) => {
                rows.push(ReportRow::measured(format!("task-{i:02}/error"), f64::NAN, false, e.to_string()));
            }
            Err(e) => return Err(e),
        }
    }
    let report = Report::assemble(cfg.experiment, cfg.domain.clone(), cfg.metric.seed, rows);
    Ok(RunOutput { report, points })
}

/// Writes the report, and the point cloud when there is one, into `dir`.
pub fn write_outputs(out: &RunOutput, cfg: &ExperimentConfig, dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let report = dir.join(&cfg.output.report);
    std::fs::write(&report, out.report.to_json())?;
    written.push(report);
    if let Some(name) = &cfg.output.points {
        if !out.points.is_empty() {
            let path = dir.join(name);
            std::fs::write(&path, points_csv(&out.points))?;
            written.push(path);
        }
    }
    Ok(written)
}
