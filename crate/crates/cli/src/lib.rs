#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! The `phi-ineq` command-line front end.

pub mod config;
pub mod output;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::error::ErrorKind;

use phi_ineq_core::report::{build_ledger, LedgerSummary};
use phi_ineq_core::selftest::run_selftest;
use phi_ineq_core::verify::{
    hermite_hadamard_check, lemma1_identity_check, sweep, verify_point, BoundReport, Status, Summary, Theorem,
};

use config::{parse_config, Format, Job, ParseOutcome, RunConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Exit status for a set of reports: any FAIL wins over any ERROR.
pub fn exit_code(reports: &[BoundReport]) -> i32 {
    let s = Summary::of(reports);
    if s.fail > 0 {
        EXIT_FAIL
    } else if s.error > 0 {
        EXIT_NUMERICAL
    } else {
        EXIT_PASS
    }
}

/// The rendered artifact and exit status of one run.
pub struct Outcome {
    pub text: String,
    pub summary: Option<String>,
    pub code: i32,
}

fn summary_line(reports: &[BoundReport]) -> String {
    let s = Summary::of(reports);
    format!(
        "{} reports: {} PASS, {} FAIL, {} HYPOTHESIS_UNMET, {} ERROR",
        s.total(),
        s.pass,
        s.fail,
        s.hypothesis_unmet,
        s.error
    )
}

fn render_reports(command: &str, reports: &[BoundReport], format: Format) -> Result<Outcome, String> {
    let text = match format {
        Format::Csv => output::reports_csv(reports).map_err(|e| e.to_string())?,
        Format::Json => output::reports_json(command, reports),
    };
    Ok(Outcome {
        text,
        summary: Some(summary_line(reports)),
        code: exit_code(reports),
    })
}

/// Runs a validated configuration and renders its output.
pub fn execute(config: &RunConfig) -> Result<Outcome, String> {
    let opts = &config.options;
    match &config.job {
        Job::Selftest => {
            let out = run_selftest(opts);
            let text = match config.format {
                Format::Csv => output::selftest_text(&out),
                Format::Json => output::selftest_json(&out),
            };
            let code = if out.passed() { EXIT_PASS } else { EXIT_FAIL };
            Ok(Outcome { text, summary: None, code })
        }
        Job::Verify {
            function,
            params,
            kernel,
            theorem,
        } => {
            let report = match theorem {
                Theorem::T1 | Theorem::T2 => verify_point(function, params, kernel, *theorem, opts),
                Theorem::Lemma1 => lemma1_identity_check(function, params, opts),
                Theorem::HH => hermite_hadamard_check(function, params.interval, opts),
            };
            let mut out = render_reports("verify", std::slice::from_ref(&report), config.format)?;
            if let (Status::Error, Some(msg), Some(line)) = (report.status, &report.message, &mut out.summary) {
                line.push_str(&format!("; {msg}"));
            }
            Ok(out)
        }
        Job::Sweep(plan) => {
            let reports = sweep(plan).map_err(|e| e.to_string())?;
            render_reports("sweep", &reports, config.format)
        }
        Job::Coeffs(grid) => {
            let entries = build_ledger(grid, &opts.quad);
            let text = match config.format {
                Format::Csv => output::ledger_csv(&entries).map_err(|e| e.to_string())?,
                Format::Json => output::ledger_json(&entries),
            };
            let s = LedgerSummary::of(&entries);
            let oracle_failed = entries.iter().any(|e| !e.oracle_value.is_finite());
            Ok(Outcome {
                text,
                summary: Some(format!(
                    "{} entries: {} AGREES, {} DISAGREES, {} PRINTED_UNDEFINED",
                    entries.len(),
                    s.agrees,
                    s.disagrees,
                    s.printed_undefined
                )),
                code: if oracle_failed { EXIT_NUMERICAL } else { EXIT_PASS },
            })
        }
    }
}

/// Parses `args`, runs, writes output, and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_config(args, None) {
        Ok(c) => c,
        Err(ParseOutcome::Clap(e)) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == EXIT_PASS { stdout } else { stderr };
            let _ = write!(sink, "{text}");
            return code;
        }
        Err(ParseOutcome::Usage(e)) => {
            for line in &e.0 {
                let _ = writeln!(stderr, "usage error: {line}");
            }
            return EXIT_USAGE;
        }
    };
    let outcome = match execute(&config) {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_NUMERICAL;
        }
    };
    match &config.out {
        Some(path) => {
            if let Err(e) = fs::write(path, &outcome.text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_NUMERICAL;
            }
        }
        None => {
            let _ = stdout.write_all(outcome.text.as_bytes());
        }
    }
    if let Some(s) = &outcome.summary {
        let _ = writeln!(stderr, "{s}");
    }
    outcome.code
}
