//! Flat-file reports: `records.csv`, `summary.json` and `grids/*.csv`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::discmaps::VFunction;
use crate::error::{Error, Result};

use super::config::ExperimentConfig;
use super::reduction::ReductionReport;
use super::suite::SuiteReport;
use super::sweep::{exit_code, ResultRecord, SectionTable, Verdict, CSV_HEADER};

/// Bumped whenever a column or summary key changes meaning.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub crate_version: String,
    pub report_schema: u32,
}

impl Default for Versions {
    fn default() -> Self {
        Self { crate_version: env!("CARGO_PKG_VERSION").to_string(), report_schema: REPORT_SCHEMA }
    }
}

/// Contents of `summary.json`. No timestamps, so reruns are identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub versions: Versions,
    pub config: ExperimentConfig,
    pub records: usize,
    pub verdicts: BTreeMap<String, usize>,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Vec<ReductionReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discmap: Option<SuiteReport>,
}

impl Summary {
    pub fn new(config: &ExperimentConfig, records: &[ResultRecord]) -> Self {
        let mut verdicts: BTreeMap<String, usize> = Verdict::ALL.iter().map(|v| (v.to_string(), 0)).collect();
        for r in records {
            *verdicts.entry(r.verdict.to_string()).or_default() += 1;
        }
        Self {
            versions: Versions::default(),
            config: config.clone(),
            records: records.len(),
            verdicts,
            exit_code: exit_code(records),
            reduction: None,
            discmap: None,
        }
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Header plus one row per record, in the given order.
pub fn records_csv(records: &[ResultRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to emit".into()));
    }
    let mut s = CSV_HEADER.join(",");
    s.push('\n');
    for r in records {
        let row: Vec<String> = r.csv_fields().iter().map(|f| csv_escape(f)).collect();
        s.push_str(&row.join(","));
        s.push('\n');
    }
    Ok(s)
}

/// Paths written by [`emit`].
#[derive(Debug, Clone, Default)]
pub struct Emitted {
    pub records: Option<PathBuf>,
    pub summary: PathBuf,
    pub grids: Vec<PathBuf>,
}

/// Everything one run can report.
#[derive(Debug, Clone, Default)]
pub struct Report<'a> {
    pub records: &'a [ResultRecord],
    pub sections: &'a [SectionTable],
    pub functions: &'a [VFunction],
    pub reduction: Option<Vec<ReductionReport>>,
    pub discmap: Option<SuiteReport>,
}

fn grid_name(eps: f64) -> String {
    format!("section_eps_{eps:+.6}.csv").replace('+', "p").replace('-', "m")
}

/// Writes the report under `dir`. A report with neither records nor a
/// disc-map suite is an error.
pub fn emit(dir: &Path, config: &ExperimentConfig, report: Report<'_>) -> Result<Emitted> {
    if report.records.is_empty() && report.discmap.is_none() {
        return Err(Error::InvalidArgument("no records to emit".into()));
    }
    std::fs::create_dir_all(dir)?;
    let mut out = Emitted::default();
    if !report.records.is_empty() {
        let path = dir.join("records.csv");
        std::fs::write(&path, records_csv(report.records)?)?;
        out.records = Some(path);
    }
    if config.output.grids && !(report.sections.is_empty() && report.functions.is_empty()) {
        let gdir = dir.join("grids");
        std::fs::create_dir_all(&gdir)?;
        for t in report.sections {
            let path = gdir.join(grid_name(t.eps));
            std::fs::write(&path, t.to_csv())?;
            out.grids.push(path);
        }
        for (i, f) in report.functions.iter().enumerate() {
            let name = f.tag.clone().unwrap_or_else(|| format!("function_{i}"));
            let path = gdir.join(format!("disc_{name}.csv"));
            f.write_csv(&path)?;
            out.grids.push(path);
        }
    }
    let mut summary = Summary::new(config, report.records);
    summary.reduction = report.reduction;
    summary.discmap = report.discmap;
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    std::fs::write(&path, text + "\n")?;
    out.summary = path;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(eps: f64, verdict: Verdict) -> ResultRecord {
        ResultRecord {
            eps,
            t_min: 1.0,
            t_max: 1.0,
            volume: 1.0,
            volume_error: 0.0,
            rho_sys: 1.0,
            rho_dia: 1.0,
            inv_t_sigma: 1.0,
            calabi: 0.0,
            rho_sys_error: 0.0,
            rho_dia_error: 0.0,
            sys_margin: 0.0,
            dia_margin: 0.0,
            loop_residual: 0.0,
            volume_identity: 0.0,
            boundary_residual: 0.0,
            calabi_identity: 0.0,
            return_displacement: 0.0,
            fixed_closure: 0.0,
            period_defect: 0.0,
            fixed_points: 0,
            orbits: 4,
            verdict,
            note: "a, \"b\"".into(),
        }
    }

    #[test]
    fn empty_records_are_rejected() {
        assert!(records_csv(&[]).is_err());
        let dir = tempfile::tempdir().unwrap();
        assert!(emit(dir.path(), &ExperimentConfig::default(), Report::default()).is_err());
    }

    #[test]
    fn zoll_record_row() {
        let csv = records_csv(&[record(0.0, Verdict::ZollEquality)]).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("eps,t_min,t_max,volume"));
        assert!(lines[1].contains(",zoll_equality,\"a, \"\"b\"\"\""));
    }

    #[test]
    fn grid_names_are_signed() {
        assert_eq!(grid_name(0.05), "section_eps_p0.050000.csv");
        assert_eq!(grid_name(-0.01), "section_eps_m0.010000.csv");
    }
}
