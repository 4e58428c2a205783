use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{SuiteSpec, TOOL_VERSION};
use crate::error::{Error, Result};
use crate::inequalities::{CheckOutcome, LinkStatus};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub config: usize,
    pub trial: usize,
    pub seed: u64,
    pub outcome: CheckOutcome,
    /// Numerical failure that prevented the check from completing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub records: usize,
    pub total_links: usize,
    pub checked_links: usize,
    pub failed_links: usize,
    pub vacuous_links: usize,
    pub not_applicable_links: usize,
    pub not_applicable_records: usize,
    pub errored_records: usize,
    /// Smallest margin per link description, over checked links.
    pub worst_margin: BTreeMap<String, f64>,
    pub wall_time_seconds: f64,
}

impl Summary {
    pub fn tally(records: &[TrialRecord], wall_time_seconds: f64) -> Self {
        let mut s = Summary {
            records: records.len(),
            total_links: 0,
            checked_links: 0,
            failed_links: 0,
            vacuous_links: 0,
            not_applicable_links: 0,
            not_applicable_records: 0,
            errored_records: 0,
            worst_margin: BTreeMap::new(),
            wall_time_seconds,
        };
        for r in records {
            if r.error.is_some() {
                s.errored_records += 1;
            }
            if r.outcome.not_applicable.is_some() {
                s.not_applicable_records += 1;
            }
            for link in &r.outcome.links {
                s.total_links += 1;
                match link.status {
                    LinkStatus::Checked => {
                        s.checked_links += 1;
                        if !link.pass {
                            s.failed_links += 1;
                        }
                        s.worst_margin
                            .entry(link.description.clone())
                            .and_modify(|w| *w = w.min(link.margin))
                            .or_insert(link.margin);
                    }
                    LinkStatus::Vacuous => s.vacuous_links += 1,
                    LinkStatus::NotApplicable => s.not_applicable_links += 1,
                }
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub spec: SuiteSpec,
    pub records: Vec<TrialRecord>,
    pub summary: Summary,
}

impl Report {
    pub fn new(spec: SuiteSpec, records: Vec<TrialRecord>, wall_time_seconds: f64) -> Self {
        let summary = Summary::tally(&records, wall_time_seconds);
        Self {
            tool_version: TOOL_VERSION.to_string(),
            spec,
            records,
            summary,
        }
    }

    /// No failed link and no numerical error.
    pub fn success(&self) -> bool {
        self.summary.failed_links == 0 && self.summary.errored_records == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records
            .iter()
            .filter(|r| r.error.is_some() || !r.outcome.pass())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One row per link: suite, config, trial, seed, link, status, margin, scale, pass, params.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "suite", "config", "trial", "seed", "link", "status", "margin", "scale", "pass", "params",
        ])?;
        for r in &self.records {
            let params = r
                .outcome
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";");
            for link in &r.outcome.links {
                let status = match link.status {
                    LinkStatus::Checked => "checked",
                    LinkStatus::Vacuous => "vacuous",
                    LinkStatus::NotApplicable => "not_applicable",
                };
                out.write_record([
                    self.spec.suite.name(),
                    &r.config.to_string(),
                    &r.trial.to_string(),
                    &r.seed.to_string(),
                    &link.description,
                    status,
                    &link.margin.to_string(),
                    &link.scale.to_string(),
                    &link.pass.to_string(),
                    &params,
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::UnknownName {
                kind: "report format",
                name: s.to_string(),
            }),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

pub fn emit_report(report: &Report, format: ReportFormat, path: &Path) -> Result<()> {
    let io_err = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let file = std::fs::File::create(path).map_err(io_err)?;
    let mut w = std::io::BufWriter::new(file);
    match format {
        ReportFormat::Json => w.write_all(report.to_json().as_bytes()).map_err(io_err)?,
        ReportFormat::Csv => report.write_csv(&mut w)?,
    }
    w.flush().map_err(io_err)
}
