//! `OutputRecord` emission as CSV or JSON.

use std::io::Write;

use coulomb_momentum::VerificationReport;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::Format;
use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

pub type Row = Map<String, Value>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema_version: String,
    pub command: String,
    pub rows: Vec<Row>,
    pub reports: Vec<VerificationReport>,
    /// CSV column order of `rows`.
    #[serde(skip)]
    pub columns: Vec<String>,
}

impl OutputRecord {
    pub fn table(command: &str, columns: &[&str], rows: Vec<Row>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            rows,
            reports: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn reports(command: &str, reports: Vec<VerificationReport>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            command: command.into(),
            rows: Vec::new(),
            reports,
            columns: Vec::new(),
        }
    }

    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed)
    }

    pub fn write<W: Write>(&self, format: Format, out: W) -> Result<(), CliError> {
        match format {
            Format::Json => self.write_json(out),
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_json<W: Write>(&self, mut out: W) -> Result<(), CliError> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    fn write_csv<W: Write>(&self, out: W) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        if self.reports.is_empty() {
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(self.columns.iter().map(|c| format_cell(row.get(c).unwrap_or(&Value::Null))))?;
            }
        } else {
            w.write_record(["check_name", "metric", "tolerance", "passed", "runtime_ms", "parameters"])?;
            for r in &self.reports {
                w.write_record([
                    r.check_name.clone(),
                    format_real(r.metric),
                    format_real(r.tolerance),
                    r.passed.to_string(),
                    format_real(r.runtime_ms),
                    serde_json::to_string(&r.parameters)?,
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// 17 significant digits, `.` as decimal separator.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn format_cell(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => format_real(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn real_formatting() {
        assert_eq!(format_real(-0.5), "-5.0000000000000000e-1");
        assert_eq!(format_real(1.0 / 3.0), "3.3333333333333331e-1");
        assert_eq!(format_real(f64::NAN), "nan");
    }

    #[test]
    fn csv_table() {
        let mut row = Row::new();
        row.insert("n".into(), json!(1));
        row.insert("energy".into(), json!(-0.5));
        let rec = OutputRecord::table("energies", &["n", "energy"], vec![row]);
        let mut buf = Vec::new();
        rec.write(Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,energy\n1,-5.0000000000000000e-1\n");
    }
}
