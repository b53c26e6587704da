//! Command-line driver: validate surfaces, run the verification battery and
//! emit versioned JSON reports.

mod inputs;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use floerveer::analysis::AnalysisConfig;

use crate::report::{run, RunReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Parse and validate only.
    Validate,
    /// Compute everything; verdicts are reported but do not affect the exit code.
    Report,
    /// Compute everything; exit 1 unless every verdict passes.
    Verify,
    /// Polynomials and the truncated reciprocal of the anti-veering polynomial.
    Zeta,
    /// Verify every surface in the given files and directories, in parallel.
    Batch,
}

#[derive(Debug, Parser)]
#[command(
    name = "floerveer",
    version,
    about = "Verify veering branched surfaces and their polynomials"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value = "verify")]
    pub mode: Mode,
    /// Surface files (.json), census files (with --census) or directories (batch mode).
    #[arg(long, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Degree cap L of the truncated reciprocal series.
    #[arg(long, default_value_t = 8)]
    pub trunc_degree: u32,
    /// Largest number of connecting domains returned for one state pair.
    #[arg(long)]
    pub budget_domains: Option<usize>,
    /// Largest number of states enumerated per surface.
    #[arg(long)]
    pub budget_states: Option<usize>,
    /// Reject unknown keys in surface files.
    #[arg(long)]
    pub strict: bool,
    /// Functional for the fibered profile, as comma-separated integers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub fibered_class: Option<Vec<i64>>,
    /// Read census signature strings (`<isosig>_<angles>`, one per line).
    #[arg(long)]
    pub census: bool,
    /// Include wall-clock timings (makes the report nondeterministic).
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("budget {0} must be positive")]
    ZeroBudget(&'static str),
    #[error("fibered class must not be empty")]
    EmptyFiberedClass,
}

impl Cli {
    pub fn analysis_config(&self) -> Result<AnalysisConfig, ConfigError> {
        let mut cfg = AnalysisConfig {
            trunc_degree: self.trunc_degree,
            fibered_class: self.fibered_class.clone(),
            ..AnalysisConfig::default()
        };
        if let Some(b) = self.budget_domains {
            if b == 0 {
                return Err(ConfigError::ZeroBudget("--budget-domains"));
            }
            cfg.domains.max_domains = b;
        }
        if let Some(b) = self.budget_states {
            if b == 0 {
                return Err(ConfigError::ZeroBudget("--budget-states"));
            }
            cfg.states.max_states = b;
        }
        if matches!(&self.fibered_class, Some(v) if v.is_empty()) {
            return Err(ConfigError::EmptyFiberedClass);
        }
        Ok(cfg)
    }
}

fn emit(cli: &Cli, report: &RunReport) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("FLOERVEER_LOG", "warn")).init();
    let cli = Cli::parse();
    let report = run(&cli);
    if let Err(e) = emit(&cli, &report) {
        eprintln!("floerveer: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if let Some(e) = &report.config_error {
        eprintln!("floerveer: {e}");
    }
    ExitCode::from(report.exit_code)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("floerveer").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn defaults() {
        let cli = parse(&["--input", "a.json"]);
        assert_eq!(cli.mode, Mode::Verify);
        let cfg = cli.analysis_config().unwrap();
        assert_eq!(cfg.trunc_degree, 8);
        assert_eq!(cfg.fibered_class, None);
    }

    #[test]
    fn fibered_class_accepts_negatives() {
        let cli = parse(&["--input", "a.json", "--fibered-class", "-1,2"]);
        assert_eq!(
            cli.analysis_config().unwrap().fibered_class,
            Some(vec![-1, 2])
        );
    }

    #[test]
    fn zero_budgets_are_rejected() {
        let cli = parse(&["--input", "a.json", "--budget-states", "0"]);
        assert!(matches!(
            cli.analysis_config(),
            Err(ConfigError::ZeroBudget("--budget-states"))
        ));
    }

    #[test]
    fn input_is_required() {
        assert!(Cli::try_parse_from(["floerveer", "--mode", "validate"]).is_err());
    }
}
