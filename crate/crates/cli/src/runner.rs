//! The `run`, `sweep` and `check` commands.

use std::io::Write;
use std::path::{Path, PathBuf};

use dissipative_core::diagnostics::{
    check_dissipation_inequality, default_slack_tol, read_csv, write_csv, CheckReport, EnergyLedger,
};
use dissipative_core::timestep::{run_transient, RunFailure};

use crate::config::{ConfigEntries, RunConfig, NUMERIC_KEYS};
use crate::presets::{setup, Setup};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_SOLVER_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

/// Result of marching a configured problem.
pub struct RunOutcome {
    pub ledger: EnergyLedger,
    pub check: CheckReport,
    pub failure: Option<RunFailure>,
    pub steps_requested: usize,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.check.pass
    }

    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            EXIT_SOLVER_FAILED
        } else if !self.check.pass {
            EXIT_CHECK_FAILED
        } else {
            EXIT_OK
        }
    }
}

pub fn execute(setup: &Setup, slack_tol: Option<f64>) -> RunOutcome {
    let result = run_transient(
        setup.model.as_ref(),
        &setup.space,
        &setup.grid,
        &setup.initial,
        setup.dg_order,
        &setup.newton,
    );
    let (ledger, failure) = match result {
        Ok(run) => (run.ledger, None),
        Err(f) => (f.partial.ledger.clone(), Some(f)),
    };
    let e0 = ledger.rows().first().map_or(0.0, |r| r.energy);
    let check = check_dissipation_inequality(&ledger, slack_tol.unwrap_or_else(|| default_slack_tol(e0)));
    RunOutcome {
        ledger,
        check,
        failure,
        steps_requested: setup.grid.n_slabs(),
    }
}

fn summary(config: &RunConfig, setup: &Setup, outcome: &RunOutcome) -> String {
    let done = outcome.ledger.len().saturating_sub(1);
    let energy = outcome.ledger.last().map_or(f64::NAN, |r| r.energy);
    let mut s = format!(
        "{} k={} tau={} steps={}/{} final_energy={:.6e} min_slack={:.3e} check={}",
        config.problem,
        setup.dg_order,
        setup.tau,
        done,
        outcome.steps_requested,
        energy,
        outcome.check.detail("min_slack").unwrap_or(0.0),
        if outcome.check.pass { "PASS" } else { "FAIL" },
    );
    if let Some(f) = &outcome.failure {
        s.push_str(&format!(" error=[{f}]"));
    }
    s.push_str(&format!(" out={}", config.out.display()));
    s
}

fn run_one(config: &RunConfig) -> Result<(String, i32), CliError> {
    let setup = setup(config)?;
    let outcome = execute(&setup, config.slack_tol);
    write_csv(&outcome.ledger, &config.out)?;
    Ok((summary(config, &setup, &outcome), outcome.exit_code()))
}

/// Runs one configuration, writes its ledger (partial on solver failure)
/// and prints a one-line summary. Returns the exit status.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> i32 {
    let (line, code) = match run_one(config) {
        Ok(v) => v,
        Err(e) => (format!("{} error=[{e}]", config.problem), EXIT_USAGE),
    };
    let _ = writeln!(out, "{line}");
    code
}

/// `out` with `_<value>` inserted before the extension.
pub fn suffixed_path(path: &Path, value: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}_{value}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{value}"),
    };
    path.with_file_name(name)
}

/// One run per value of `param`; failures are reported and skipped.
pub fn sweep(template: &ConfigEntries, param: &str, values: &[String], out: &mut dyn Write) -> i32 {
    if !NUMERIC_KEYS.contains(&param) {
        let _ = writeln!(out, "error: '{param}' is not a numeric configuration key");
        return EXIT_USAGE;
    }
    let mut worst = EXIT_OK;
    for value in values {
        let mut entries = template.clone();
        let result = entries
            .set(param, value)
            .and_then(|_| entries.validate())
            .map_err(CliError::from)
            .and_then(|mut config| {
                config.out = suffixed_path(&config.out, value);
                run_one(&config)
            });
        let (line, code) = result.unwrap_or_else(|e| (format!("error=[{e}]"), EXIT_USAGE));
        let _ = writeln!(out, "{param}={value} {line}");
        worst = worst.max(code);
    }
    worst
}

/// Re-checks the dissipation inequality on an existing ledger.
pub fn check(path: &Path, tol: Option<f64>, out: &mut dyn Write) -> i32 {
    let ledger = match read_csv(path) {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(out, "{}: error=[{e}]", path.display());
            return EXIT_USAGE;
        }
    };
    let e0 = ledger.rows().first().map_or(0.0, |r| r.energy);
    let report = check_dissipation_inequality(&ledger, tol.unwrap_or_else(|| default_slack_tol(e0)));
    let _ = writeln!(
        out,
        "{}: rows={} min_slack={:.3e} min_telescoped_slack={:.3e} tol={:.3e} check={}{}",
        path.display(),
        ledger.len(),
        report.detail("min_slack").unwrap_or(0.0),
        report.detail("min_telescoped_slack").unwrap_or(0.0),
        report.tolerance,
        if report.pass { "PASS" } else { "FAIL" },
        if report.offending_steps.is_empty() {
            String::new()
        } else {
            format!(" offending_steps={:?}", report.offending_steps)
        },
    );
    if report.pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}
