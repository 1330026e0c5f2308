//! Command implementations: each one runs the corresponding pipeline and
//! packages a machine report, a human table, and a verdict.

use anyhow::{bail, Context, Result};
use serde::Serialize;

use proreg_core::cohomo::{
    ext_colimit_local_cohomology, gamma_torsion, heuristic_degree_bound, is_proregular,
    is_weakly_proregular, theorem_crosscheck, CrosscheckBounds, CrosscheckVerdict,
};
use proreg_core::homcomplex::{homology_dims, les_exactness_check, LesReport};
use proreg_core::koszul::{cech_cohomology, koszul_chain, koszul_cochain, ColimitReport};
use proreg_core::ProregReport;

use crate::config::{default_ses, ProblemConfig};
use crate::report::{
    colimit_table, dim_table, gamma_table, render_json, CommandOutput, Verdict,
};

#[derive(Serialize)]
struct DimRow {
    degree: i64,
    dim: usize,
}

#[derive(Serialize)]
struct KoszulHomologyResults {
    spot: usize,
    level: usize,
    table: Vec<DimRow>,
}

#[derive(Serialize)]
struct ColimitResults {
    pipeline: &'static str,
    spots: Vec<ColimitReport>,
}

#[derive(Serialize)]
struct LesResults {
    ses_source: &'static str,
    levels: Vec<usize>,
    reports: Vec<LesReport>,
}

/// Per-degree dimensions of one Koszul homology spot at a fixed power.
pub fn koszul_homology(cfg: &ProblemConfig, spot: usize, level: usize) -> Result<CommandOutput> {
    let r = cfg.sequence.len();
    if spot > r {
        bail!("spot {spot} exceeds the sequence length {r}");
    }
    let complex = koszul_chain(&cfg.ctx, &cfg.sequence, level)?;
    let table: Vec<DimRow> = cfg
        .bounds
        .degree_window()
        .map(|d| {
            homology_dims(&cfg.ctx, &complex, &cfg.module, spot, d).map(|dim| DimRow {
                degree: d,
                dim,
            })
        })
        .collect::<Result<_, _>>()?;
    let results = KoszulHomologyResults { spot, level, table };
    let verdict = Verdict::Pass;
    let rows: Vec<(i64, usize)> = results.table.iter().map(|r| (r.degree, r.dim)).collect();
    Ok(CommandOutput {
        json: render_json("koszul-homology", cfg.raw(), &results, verdict),
        table: dim_table(
            &format!("Koszul homology H_{spot}(a^{level}, M)"),
            &rows,
        ),
        verdict,
    })
}

fn spots_to_run(cfg: &ProblemConfig, spot: Option<usize>) -> Result<Vec<usize>> {
    let r = cfg.sequence.len();
    match spot {
        Some(s) if s > r => bail!("spot {s} exceeds the sequence length {r}"),
        Some(s) => Ok(vec![s]),
        None => Ok((0..=r).collect()),
    }
}

/// Cech cohomology tables via the Koszul-tower colimit.
pub fn cech(cfg: &ProblemConfig, spot: Option<usize>) -> Result<CommandOutput> {
    let mut reports = Vec::new();
    for s in spots_to_run(cfg, spot)? {
        reports.push(cech_cohomology(
            &cfg.ctx,
            &cfg.sequence,
            &cfg.module,
            s,
            cfg.bounds.degree_window(),
            cfg.bounds.n_max,
            cfg.bounds.window,
        )?);
    }
    finish_colimit("cech", "koszul-colimit", cfg, reports)
}

/// Local cohomology tables via Taylor-resolution Ext colimits.
pub fn localcoh(cfg: &ProblemConfig, spot: Option<usize>) -> Result<CommandOutput> {
    let mut reports = Vec::new();
    for s in spots_to_run(cfg, spot)? {
        reports.push(ext_colimit_local_cohomology(
            &cfg.ctx,
            &cfg.sequence,
            &cfg.module,
            s,
            cfg.bounds.degree_window(),
            cfg.bounds.n_max,
            cfg.bounds.window,
        )?);
    }
    finish_colimit("localcoh", "taylor-ext-colimit", cfg, reports)
}

fn finish_colimit(
    command: &str,
    pipeline: &'static str,
    cfg: &ProblemConfig,
    spots: Vec<ColimitReport>,
) -> Result<CommandOutput> {
    let verdict = if spots.iter().all(ColimitReport::all_certified) {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let mut table = String::new();
    for report in &spots {
        table.push_str(&colimit_table(
            &format!("H^{} ({pipeline})", report.spot),
            report,
        ));
        table.push('\n');
    }
    let results = ColimitResults { pipeline, spots };
    Ok(CommandOutput {
        json: render_json(command, cfg.raw(), &results, verdict),
        table,
        verdict,
    })
}

/// Torsion-submodule dimension table.
pub fn gamma(cfg: &ProblemConfig) -> Result<CommandOutput> {
    let report = gamma_torsion(
        &cfg.ctx,
        &cfg.module,
        &cfg.sequence,
        cfg.bounds.degree_window(),
        cfg.bounds.n_max,
    )?;
    let verdict = if report.all_stabilized() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Ok(CommandOutput {
        json: render_json("gamma", cfg.raw(), &report, verdict),
        table: gamma_table(&report),
        verdict,
    })
}

/// Weak-proregularity witness search.
pub fn check_wpr(cfg: &ProblemConfig) -> Result<CommandOutput> {
    let report = is_weakly_proregular(
        &cfg.ctx,
        &cfg.sequence,
        &cfg.bounds.n_list,
        cfg.bounds.m_max,
        cfg.bounds.degree_bound,
    )?;
    let verdict = if report.certified() {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let table = witness_table(
        &format!(
            "weak proregularity witnesses (m_max = {}, degrees checked up to {})",
            report.m_max, report.degree_bound
        ),
        &report.entries,
    );
    Ok(CommandOutput {
        json: render_json("check-wpr", cfg.raw(), &report, verdict),
        table,
        verdict,
    })
}

/// Colon-ideal proregularity witness search.
pub fn check_proregular(cfg: &ProblemConfig) -> Result<CommandOutput> {
    let report: ProregReport = is_proregular(
        &cfg.ctx,
        &cfg.sequence,
        &cfg.bounds.n_list,
        cfg.bounds.m_max,
    )?;
    let verdict = if report.all_witnesses_found {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    let table = witness_table(
        &format!("proregularity witnesses (m_max = {})", report.m_max),
        &report.entries,
    );
    Ok(CommandOutput {
        json: render_json("check-proregular", cfg.raw(), &report, verdict),
        table,
        verdict,
    })
}

fn witness_table(title: &str, entries: &[proreg_core::cohomo::WprEntry]) -> String {
    let mut out = format!("{title}\n  i  n  witness\n");
    for entry in entries {
        for row in &entry.results {
            let w = match row.outcome.witness() {
                Some(m) => m.to_string(),
                None => "not found".to_string(),
            };
            out.push_str(&format!(
                "  {:>1}  {:>1}  {w}\n",
                entry.homological_index, row.n
            ));
        }
    }
    out
}

/// Long-exact-sequence verification of the tensored SES for Koszul cochain
/// complexes at levels `1..=n_max`.
pub fn les_check(cfg: &ProblemConfig) -> Result<CommandOutput> {
    let (ses, source) = match &cfg.ses {
        Some(s) => (s.clone(), "config"),
        None => (default_ses(&cfg.ctx, &cfg.sequence)?, "default"),
    };
    let levels: Vec<usize> = (1..=cfg.bounds.n_max).collect();
    let mut reports = Vec::new();
    for &n in &levels {
        let complex = koszul_cochain(&cfg.ctx, &cfg.sequence, n)?;
        reports.push(les_exactness_check(
            &cfg.ctx,
            &ses,
            &complex,
            cfg.bounds.degree_window(),
            None,
        )?);
    }
    let all_exact = reports.iter().all(LesReport::all_exact);
    let verdict = if all_exact { Verdict::Pass } else { Verdict::Fail };
    let mut table = String::new();
    for (n, report) in levels.iter().zip(&reports) {
        let status = if report.all_exact() { "exact" } else { "FAILED" };
        table.push_str(&format!("level {n}: {status}\n"));
        for r in &report.degrees {
            if let Some(f) = &r.first_failure {
                table.push_str(&format!("  {f}\n"));
            }
        }
    }
    let results = LesResults {
        ses_source: source,
        levels,
        reports,
    };
    Ok(CommandOutput {
        json: render_json("les-check", cfg.raw(), &results, verdict),
        table,
        verdict,
    })
}

/// Full cross-check: weak proregularity plus agreement of the two
/// cohomology pipelines and the torsion functor.
pub fn crosscheck(cfg: &ProblemConfig) -> Result<CommandOutput> {
    let bounds = CrosscheckBounds {
        n_max: cfg.bounds.n_max,
        stability_window: cfg.bounds.window,
        m_max: cfg.bounds.m_max,
        n_list: cfg.bounds.n_list.clone(),
        degree_bound: Some(cfg.bounds.degree_bound.unwrap_or_else(|| {
            heuristic_degree_bound(&cfg.sequence, &cfg.module, cfg.bounds.m_max)
        })),
    };
    let report = theorem_crosscheck(
        &cfg.ctx,
        &cfg.sequence,
        &cfg.module,
        cfg.bounds.degree_window(),
        &bounds,
    )?;
    let verdict = match report.verdict {
        CrosscheckVerdict::Pass => Verdict::Pass,
        CrosscheckVerdict::Inconclusive => Verdict::Inconclusive,
        CrosscheckVerdict::Fail => Verdict::Fail,
    };
    let mut table = String::new();
    table.push_str(&format!(
        "weak proregularity: {}\n",
        if report.wpr.certified() {
            "certified (up to the degree bound)"
        } else {
            "not certified within bounds"
        }
    ));
    for colimit in &report.cech {
        table.push_str(&colimit_table(
            &format!("H^{} (koszul-colimit)", colimit.spot),
            colimit,
        ));
    }
    if let Some(ext) = &report.ext {
        for colimit in ext {
            table.push_str(&colimit_table(
                &format!("H^{} (taylor-ext-colimit)", colimit.spot),
                colimit,
            ));
        }
    } else {
        table.push_str("taylor-ext pipeline skipped (non-monomial sequence or quotient ring)\n");
    }
    table.push_str(&gamma_table(&report.gamma));
    if report.diffs.is_empty() {
        table.push_str("tables agree on all certified entries\n");
    } else {
        for d in &report.diffs {
            table.push_str(&format!("DIFF: {d}\n"));
        }
    }
    table.push_str(&format!("verdict: {}\n", verdict.as_str()));
    Ok(CommandOutput {
        json: render_json("crosscheck", cfg.raw(), &report, verdict),
        table,
        verdict,
    })
}

/// Writes the machine report when requested, prints the chosen stdout
/// format, and returns the exit code.
pub fn emit(output: &CommandOutput, out_path: Option<&std::path::Path>, json_stdout: bool) -> Result<i32> {
    if let Some(path) = out_path {
        std::fs::write(path, &output.json)
            .with_context(|| format!("writing report to {}", path.display()))?;
    }
    if json_stdout {
        print!("{}", output.json);
    } else {
        print!("{}", output.table);
    }
    Ok(output.verdict.exit_code())
}
