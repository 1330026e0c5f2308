//! Report emission: a versioned machine-readable JSON document plus a
//! human-readable dimension table. Reports contain no timestamps or host
//! data, so identical inputs produce byte-identical files.

use serde::Serialize;

use proreg_core::cohomo::GammaReport;
use proreg_core::koszul::ColimitReport;

use crate::config::RawConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Fail => "fail",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Inconclusive => 2,
            Verdict::Fail => 1,
        }
    }
}

#[derive(Serialize)]
struct Report<'a, R: Serialize> {
    schema: u32,
    command: &'a str,
    config: &'a RawConfig,
    results: &'a R,
    verdict: &'a str,
}

/// Everything a command produces: the machine report, the table, and the
/// verdict deciding the exit code.
pub struct CommandOutput {
    pub json: String,
    pub table: String,
    pub verdict: Verdict,
}

pub fn render_json<R: Serialize>(
    command: &str,
    config: &RawConfig,
    results: &R,
    verdict: Verdict,
) -> String {
    let report = Report {
        schema: SCHEMA_VERSION,
        command,
        config,
        results,
        verdict: verdict.as_str(),
    };
    let mut out = serde_json::to_string_pretty(&report).expect("report serializes");
    out.push('\n');
    out
}

/// Table of one colimit report: degree, dimension, certification metadata.
pub fn colimit_table(title: &str, report: &ColimitReport) -> String {
    let mut out = format!(
        "{title} (n_max = {}, window = {})\n",
        report.n_max, report.stability_window
    );
    out.push_str("  degree  dim  certified  stable_from\n");
    for e in &report.entries {
        let stable = if e.stabilization_level > report.n_max {
            "-".to_string()
        } else {
            e.stabilization_level.to_string()
        };
        out.push_str(&format!(
            "  {:>6}  {:>3}  {:>9}  {:>11}\n",
            e.degree,
            e.stabilized_dim,
            if e.certified { "yes" } else { "NO" },
            stable
        ));
    }
    out
}

pub fn gamma_table(report: &GammaReport) -> String {
    let mut out = format!("torsion submodule dimensions (n_max = {})\n", report.n_max);
    out.push_str("  degree  dim  stabilized\n");
    for e in &report.entries {
        out.push_str(&format!(
            "  {:>6}  {:>3}  {:>10}\n",
            e.degree,
            e.dim,
            if e.stabilized { "yes" } else { "NO" }
        ));
    }
    out
}

pub fn dim_table(title: &str, rows: &[(i64, usize)]) -> String {
    let mut out = format!("{title}\n  degree  dim\n");
    for (degree, dim) in rows {
        out.push_str(&format!("  {degree:>6}  {dim:>3}\n"));
    }
    out
}
