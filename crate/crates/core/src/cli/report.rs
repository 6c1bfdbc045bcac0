use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{Experiment, REPORT_SCHEMA};
use crate::error::{HoroError, Result};
use crate::horospheres::{Outcome, Verdict};
use crate::metric_core::Domain;
use crate::point::CPoint;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Inconclusive,
    Fail,
}

/// One checked item. Numbers that are not finite are written as `null`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub key: String,
    pub status: RowStatus,
    pub decision: Option<bool>,
    pub estimate: Option<f64>,
    pub margin: Option<f64>,
    pub converged: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ReportRow {
    /// A verdict; with `expect` set, a decided verdict must match it.
    pub fn verdict(key: impl Into<String>, v: &Verdict, expect: Option<bool>) -> ReportRow {
        let status = match v.outcome {
            Outcome::Decided if expect.map_or(true, |e| e == v.decision) => RowStatus::Pass,
            Outcome::Decided => RowStatus::Fail,
            _ => RowStatus::Inconclusive,
        };
        ReportRow {
            key: key.into(),
            status,
            decision: v.is_decided().then_some(v.decision),
            estimate: finite(v.estimate),
            margin: finite(v.margin),
            converged: v.converged,
            detail: v.detail.clone(),
            data: Value::Null,
        }
    }

    /// A numeric assertion: `margin` is the slack left under the tolerance.
    pub fn check(key: impl Into<String>, ok: bool, estimate: f64, margin: f64, detail: impl Into<String>) -> ReportRow {
        ReportRow {
            key: key.into(),
            status: if ok { RowStatus::Pass } else { RowStatus::Fail },
            decision: Some(ok),
            estimate: finite(estimate),
            margin: finite(margin),
            converged: true,
            detail: detail.into(),
            data: Value::Null,
        }
    }

    /// Tolerance check `|value − target| ≤ tol`.
    pub fn close(key: impl Into<String>, value: f64, target: f64, tol: f64) -> ReportRow {
        let err = (value - target).abs();
        ReportRow::check(key, err <= tol, value, tol - err, format!("target {target}, tolerance {tol:e}"))
    }

    /// A measurement without a pass criterion of its own.
    pub fn measured(key: impl Into<String>, estimate: f64, converged: bool, detail: impl Into<String>) -> ReportRow {
        ReportRow {
            key: key.into(),
            status: if converged { RowStatus::Pass } else { RowStatus::Inconclusive },
            decision: None,
            estimate: finite(estimate),
            margin: None,
            converged,
            detail: detail.into(),
            data: Value::Null,
        }
    }

    pub fn with_data(mut self, data: impl Serialize) -> ReportRow {
        self.data = serde_json::to_value(data).unwrap_or(Value::Null);
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub inconclusive: usize,
    pub fail: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub experiment: Experiment,
    pub domain: Option<Domain>,
    pub seed: u64,
    pub status: RowStatus,
    pub counts: Counts,
    /// Sorted by key.
    pub items: Vec<ReportRow>,
}

impl Report {
    pub fn assemble(experiment: Experiment, domain: Option<Domain>, seed: u64, mut items: Vec<ReportRow>) -> Report {
        items.sort_by(|a, b| a.key.cmp(&b.key));
        let mut counts = Counts::default();
        for r in &items {
            match r.status {
                RowStatus::Pass => counts.pass += 1,
                RowStatus::Inconclusive => counts.inconclusive += 1,
                RowStatus::Fail => counts.fail += 1,
            }
        }
        let status = items.iter().map(|r| r.status).max().unwrap_or(RowStatus::Inconclusive);
        Report { schema: REPORT_SCHEMA.into(), experiment, domain, seed, status, counts, items }
    }

    pub fn exit_status(&self) -> ExitStatus {
        match self.status {
            RowStatus::Pass => ExitStatus::Pass,
            RowStatus::Inconclusive => ExitStatus::Inconclusive,
            RowStatus::Fail => ExitStatus::AssertionFailure,
        }
    }

    pub fn item(&self, key: &str) -> Option<&ReportRow> {
        self.items.iter().find(|r| r.key == key)
    }

    /// Pretty JSON with a trailing newline; object keys come out sorted.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("reports serialize");
        let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Parses a report, refusing any schema other than the current one.
pub fn read_report(text: &str) -> Result<Report> {
    let v: Value = serde_json::from_str(text).map_err(|e| HoroError::InvalidConfig(e.to_string()))?;
    match v.get("schema").and_then(Value::as_str) {
        Some(REPORT_SCHEMA) => {}
        Some(other) => return Err(HoroError::InvalidConfig(format!("unsupported report schema {other}"))),
        None => return Err(HoroError::InvalidConfig("report has no schema".into())),
    }
    serde_json::from_value(v).map_err(|e| HoroError::InvalidConfig(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    AssertionFailure = 1,
    Inconclusive = 2,
    ConfigError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// A plot point with its tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub tag: String,
    pub point: CPoint,
}

impl PointRow {
    pub fn new(tag: &str, point: CPoint) -> PointRow {
        PointRow { tag: tag.into(), point }
    }
}

/// CSV with columns `re1,im1,re2,im2,…,tag`; shorter points leave
/// trailing coordinate cells empty.
pub fn points_csv(points: &[PointRow]) -> String {
    let dim = points.iter().map(|p| p.point.dim()).max().unwrap_or(1);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=dim).flat_map(|j| [format!("re{j}"), format!("im{j}")]).collect();
    header.push("tag".into());
    w.write_record(&header).expect("in-memory csv");
    for p in points {
        let mut rec: Vec<String> = p.point.to_real().iter().map(|x| x.to_string()).collect();
        rec.resize(2 * dim, String::new());
        rec.push(p.tag.clone());
        w.write_record(&rec).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}
