//! Machine-readable run reports.
//!
//! A report is a command echo plus one record per check. Serialized output
//! is deterministic: floats are rendered with 17 significant digits
//! (round-trip safe), map keys are emitted in struct order, and wall time is
//! deliberately *not* part of the report — it goes to stderr, so two runs
//! with the same seed produce byte-identical files.

use std::io::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{CliError, Result};

/// Output format for serialized reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One verified quantity.
///
/// `bound` is the threshold the value was compared against; records with no
/// bound (`None`) are informational classifications — they carry a measured
/// value but cannot fail. Whether the comparison is `value <= bound` or
/// `value >= bound` is a property of the individual check (monotonicity
/// checks bound from below); `pass` always stores the resolved verdict.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// A check that passes when `value` is at most `bound + tolerance`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            value,
            bound: Some(bound),
            tolerance,
            pass: value.is_finite() && value <= bound + tolerance,
        }
    }

    /// A check that passes when `value` is at least `bound - tolerance`.
    pub fn at_least(name: impl Into<String>, value: f64, bound: f64, tolerance: f64) -> Self {
        CheckRecord {
            name: name.into(),
            value,
            bound: Some(bound),
            tolerance,
            pass: value.is_finite() && value >= bound - tolerance,
        }
    }

    /// An informational record: reported, never failing.
    pub fn info(name: impl Into<String>, value: f64) -> Self {
        CheckRecord {
            name: name.into(),
            value,
            bound: None,
            tolerance: 0.0,
            pass: true,
        }
    }

    /// An informational boolean, stored as 1.0 / 0.0.
    pub fn info_flag(name: impl Into<String>, flag: bool) -> Self {
        CheckRecord::info(name, if flag { 1.0 } else { 0.0 })
    }

    /// A boolean check: passes exactly when `flag` holds.
    pub fn holds(name: impl Into<String>, flag: bool) -> Self {
        CheckRecord {
            name: name.into(),
            value: if flag { 1.0 } else { 0.0 },
            bound: Some(1.0),
            tolerance: 0.0,
            pass: flag,
        }
    }
}

/// A full command report: echo, per-check records, aggregate verdict.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<CheckRecord>,
    /// Conjunction of the per-check passes.
    pub pass: bool,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>, checks: Vec<CheckRecord>) -> Self {
        let pass = checks.iter().all(|check| check.pass);
        Report {
            command: command.into(),
            seed,
            checks,
            pass,
        }
    }

    /// Name of the first failing check, if any.
    pub fn first_failure(&self) -> Option<&str> {
        self.checks
            .iter()
            .find(|check| !check.pass)
            .map(|check| check.name.as_str())
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    /// CSV rendering: one row per check plus a trailing `aggregate` row.
    /// Columns are stable; new columns are only ever appended.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["command", "name", "value", "bound", "tolerance", "pass"])
            .expect("csv header");
        for check in &self.checks {
            writer
                .write_record([
                    self.command.as_str(),
                    check.name.as_str(),
                    &fmt_float(check.value),
                    &check.bound.map(fmt_float).unwrap_or_default(),
                    &fmt_float(check.tolerance),
                    bool_str(check.pass),
                ])
                .expect("csv row");
        }
        writer
            .write_record([
                self.command.as_str(),
                "aggregate",
                &fmt_float(if self.pass { 1.0 } else { 0.0 }),
                "",
                "",
                bool_str(self.pass),
            ])
            .expect("csv aggregate row");
        let bytes = writer.into_inner().expect("csv buffer");
        String::from_utf8(bytes).expect("csv output is utf-8")
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    /// Write the rendered report to `out` when given, else to stdout.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        emit_text(&self.render(format), out)
    }
}

/// 17 significant digits: enough for f64 round trips.
pub fn fmt_float(value: f64) -> String {
    format!("{value:.16e}")
}

fn bool_str(flag: bool) -> &'static str {
    if flag {
        "true"
    } else {
        "false"
    }
}

/// Write `text` to the given path, or to stdout when no path was given.
pub fn emit_text(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|err| CliError::Usage {
            detail: format!("cannot write `{}`: {err}", path.display()),
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())?;
            lock.flush()?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_is_the_conjunction() {
        let good = CheckRecord::at_most("a", 0.0, 1.0, 0.0);
        let bad = CheckRecord::at_most("b", 2.0, 1.0, 0.0);
        let report = Report::new("verify", Some(7), vec![good.clone(), bad]);
        assert!(!report.pass);
        assert_eq!(report.first_failure(), Some("b"));
        let all_good = Report::new("verify", None, vec![good]);
        assert!(all_good.pass);
        assert_eq!(all_good.first_failure(), None);
    }

    #[test]
    fn json_skips_the_seed_when_absent_and_ends_with_newline() {
        let report = Report::new("bound", None, vec![CheckRecord::info("total", 0.25)]);
        let text = report.to_json();
        assert!(!text.contains("\"seed\""));
        assert!(text.ends_with('\n'));
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["command"], "bound");
        assert_eq!(parsed["checks"][0]["bound"], serde_json::Value::Null);
    }

    #[test]
    fn csv_has_stable_header_and_aggregate_row() {
        let report = Report::new(
            "verify",
            Some(1),
            vec![CheckRecord::at_most("x", 0.5, 1.0, 0.0)],
        );
        let text = report.to_csv();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "command,name,value,bound,tolerance,pass"
        );
        assert!(lines.next().unwrap().starts_with("verify,x,5.0000000000000000e-1"));
        let aggregate = lines.next().unwrap();
        assert!(aggregate.starts_with("verify,aggregate,1.0000000000000000e0"));
        assert!(aggregate.ends_with("true"));
    }

    #[test]
    fn nan_values_never_pass() {
        let check = CheckRecord::at_most("nan", f64::NAN, 1.0, 0.0);
        assert!(!check.pass);
        let check = CheckRecord::at_least("nan", f64::NAN, 0.0, 0.0);
        assert!(!check.pass);
    }

    #[test]
    fn float_formatting_round_trips() {
        for value in [0.1, 2.0 / 3.0, 1e-300, 9.106_639_938_563_317e-1] {
            let text = fmt_float(value);
            assert_eq!(text.parse::<f64>().unwrap(), value);
        }
    }
}
