//! Running a mode over all inputs and assembling the report.

use std::collections::BTreeMap;

use floerveer::analysis::{analyze, AnalysisConfig, SurfaceReport, Verdict, SCHEMA_VERSION};
use floerveer::homology::build_homology;
use floerveer::relations::{antiveering_polynomial, build_cocycle};
use floerveer::vbs::Vbs;
use floerveer::zeta::{cycle_classes, positive_functional, zeta_report, ZetaReport};
use floerveer::GroupRingElement;
use rayon::prelude::*;
use serde::Serialize;

use crate::inputs::{expand, load, InputError, Source};
use crate::{Cli, Mode};

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub trunc_degree: u32,
    pub budget_domains: usize,
    pub budget_states: usize,
    pub strict: bool,
    pub fibered_class: Option<Vec<i64>>,
    pub census: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FileStatus {
    Ok,
    VerificationFailed,
    InputError,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationSummary {
    pub n: usize,
    pub edges: usize,
    pub branch_loops: usize,
    pub anti_branch_loops: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaBlock {
    pub free_rank: usize,
    pub antiveering: Option<GroupRingElement>,
    pub zeta: Option<ZetaReport>,
    pub verdicts: BTreeMap<String, Verdict>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FileResult {
    pub input: String,
    pub status: FileStatus,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<InputError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<SurfaceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaBlock>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub inputs: usize,
    pub ok: usize,
    pub verification_failed: usize,
    pub input_errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: &'static str,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigEcho>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_error: Option<String>,
    pub results: Vec<FileResult>,
    pub summary: Summary,
    #[serde(skip)]
    pub exit_code: u8,
}

fn zeta_only(vbs: &Vbs, cfg: &AnalysisConfig) -> ZetaBlock {
    let hm = build_homology(vbs);
    let c = build_cocycle(&hm);
    let mut verdicts = BTreeMap::new();
    let a = antiveering_polynomial(vbs, &c);
    let mut zeta = None;
    match (&a, cycle_classes(vbs, &hm, cfg.cycle_budget)) {
        (Err(e), _) => {
            verdicts.insert(
                "zeta_product".into(),
                Verdict::BudgetExceeded {
                    detail: e.to_string(),
                },
            );
        }
        (_, Err(e)) => {
            verdicts.insert(
                "zeta_product".into(),
                Verdict::BudgetExceeded {
                    detail: e.to_string(),
                },
            );
        }
        (Ok(a), Ok(classes)) => match positive_functional(hm.free_rank(), &classes) {
            None => {
                verdicts.insert(
                    "zeta_product".into(),
                    Verdict::NotApplicable {
                        reason: "no positive functional".into(),
                    },
                );
            }
            Some(ell) => match zeta_report(a, &ell, cfg.trunc_degree) {
                Ok(z) => {
                    verdicts.insert(
                        "zeta_product".into(),
                        Verdict::from_bool(z.product_is_one, || "A times 1/A is not 1".into()),
                    );
                    if hm.free_rank() >= 2 {
                        verdicts.insert(
                            "zeta_nonnegative".into(),
                            Verdict::from_bool(z.all_nonnegative, || {
                                "negative coefficient in 1/A".into()
                            }),
                        );
                    }
                    zeta = Some(z);
                }
                Err(e) => {
                    verdicts.insert(
                        "zeta_product".into(),
                        Verdict::Fail {
                            detail: e.to_string(),
                        },
                    );
                }
            },
        },
    }
    ZetaBlock {
        free_rank: hm.free_rank(),
        antiveering: a.ok(),
        zeta,
        verdicts,
    }
}

fn process(cli: &Cli, cfg: &AnalysisConfig, src: &Source) -> FileResult {
    let mut result = FileResult {
        input: src.label(),
        status: FileStatus::Ok,
        warnings: Vec::new(),
        error: None,
        validation: None,
        report: None,
        zeta: None,
    };
    let loaded = match load(src, cli.strict) {
        Ok(l) => l,
        Err(e) => {
            log::info!("{}: input error", result.input);
            result.status = FileStatus::InputError;
            result.error = Some(e);
            return result;
        }
    };
    result.warnings = loaded.warnings;
    let vbs = loaded.vbs;
    match cli.mode {
        Mode::Validate => {
            result.validation = Some(ValidationSummary {
                n: vbs.n(),
                edges: vbs.num_edges(),
                branch_loops: floerveer::vbs::decompose_branch_loops(&vbs).loops.len(),
                anti_branch_loops: floerveer::vbs::decompose_anti_branch_loops(&vbs)
                    .loops
                    .len(),
            });
        }
        Mode::Zeta => {
            let z = zeta_only(&vbs, cfg);
            if !z.verdicts.values().all(Verdict::acceptable) {
                result.status = FileStatus::VerificationFailed;
            }
            result.zeta = Some(z);
        }
        Mode::Report | Mode::Verify | Mode::Batch => {
            log::info!("{}: analysing n = {}", result.input, vbs.n());
            let mut r = analyze(&vbs, cfg);
            if !cli.timings {
                r.timings_ms = None;
            }
            if cli.mode != Mode::Report && !r.passed() {
                result.status = FileStatus::VerificationFailed;
            }
            result.report = Some(r);
        }
    }
    result
}

pub fn run(cli: &Cli) -> RunReport {
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool: "floerveer",
        mode: cli.mode,
        config: None,
        config_error: None,
        results: Vec::new(),
        summary: Summary::default(),
        exit_code: 0,
    };
    let cfg = match cli.analysis_config() {
        Ok(c) => c,
        Err(e) => {
            report.config_error = Some(e.to_string());
            report.exit_code = 2;
            return report;
        }
    };
    report.config = Some(ConfigEcho {
        trunc_degree: cfg.trunc_degree,
        budget_domains: cfg.domains.max_domains,
        budget_states: cfg.states.max_states,
        strict: cli.strict,
        fibered_class: cfg.fibered_class.clone(),
        census: cli.census,
    });
    let sources = expand(&cli.input, cli.census);
    let results: Vec<FileResult> = if cli.mode == Mode::Batch {
        sources
            .par_iter()
            .map(|s| match s {
                Ok(src) => process(cli, &cfg, src),
                Err((label, e)) => input_failure(label, e),
            })
            .collect()
    } else {
        sources
            .iter()
            .map(|s| match s {
                Ok(src) => process(cli, &cfg, src),
                Err((label, e)) => input_failure(label, e),
            })
            .collect()
    };
    let mut summary = Summary {
        inputs: results.len(),
        ..Summary::default()
    };
    for r in &results {
        match r.status {
            FileStatus::Ok => summary.ok += 1,
            FileStatus::VerificationFailed => summary.verification_failed += 1,
            FileStatus::InputError => summary.input_errors += 1,
        }
    }
    report.exit_code = if cli.mode == Mode::Batch {
        if results.is_empty() {
            2
        } else {
            u8::from(summary.ok != summary.inputs)
        }
    } else if summary.input_errors > 0 || results.is_empty() {
        2
    } else {
        u8::from(summary.verification_failed > 0)
    };
    report.results = results;
    report.summary = summary;
    report
}

fn input_failure(label: &str, e: &InputError) -> FileResult {
    FileResult {
        input: label.to_string(),
        status: FileStatus::InputError,
        warnings: Vec::new(),
        error: Some(e.clone()),
        validation: None,
        report: None,
        zeta: None,
    }
}
