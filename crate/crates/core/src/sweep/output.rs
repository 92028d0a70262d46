//! CSV and JSON serialisation of result rows.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::grid::ResultRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] = [
    "scenario_id",
    "axis",
    "axis_value",
    "axis2",
    "axis2_value",
    "metric",
    "analytic",
    "asymptotic",
    "mc",
    "ci_lo",
    "ci_hi",
    "trials",
];

pub const SIGNIFICANT_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Parse(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

/// `x` rounded to ten significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Ten significant digits, plain notation for moderate magnitudes.
pub fn format_number(x: f64) -> String {
    let r = round_sig(x);
    let a = r.abs();
    if r == 0.0 {
        "0".to_string()
    } else if (1e-5..1e15).contains(&a) {
        r.to_string()
    } else {
        format!("{r:e}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_number).unwrap_or_default()
}

// Same field order as the CSV header.
#[derive(Serialize)]
struct JsonRow<'a> {
    scenario_id: &'a str,
    axis: &'a str,
    axis_value: Option<f64>,
    axis2: Option<&'a str>,
    axis2_value: Option<f64>,
    metric: &'a str,
    analytic: Option<f64>,
    asymptotic: Option<f64>,
    mc: Option<f64>,
    ci_lo: Option<f64>,
    ci_hi: Option<f64>,
    trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
}

fn json_number(x: Option<f64>) -> Option<f64> {
    x.map(round_sig).filter(|v| v.is_finite())
}

impl<'a> From<&'a ResultRow> for JsonRow<'a> {
    fn from(r: &'a ResultRow) -> Self {
        JsonRow {
            scenario_id: &r.scenario_id,
            axis: &r.axis,
            axis_value: json_number(Some(r.axis_value)),
            axis2: r.axis2.as_deref(),
            axis2_value: json_number(r.axis2_value),
            metric: &r.metric,
            analytic: json_number(r.analytic),
            asymptotic: json_number(r.asymptotic),
            mc: json_number(r.mc),
            ci_lo: json_number(r.ci_lo),
            ci_hi: json_number(r.ci_hi),
            trials: r.trials,
            error: r.error.as_deref(),
        }
    }
}

struct Counting<W> {
    inner: W,
    bytes: usize,
}

impl<W: Write> Write for Counting<W> {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.bytes += n;
        Ok(n)
    }

    fn flush(&mut self) -> std::io::Result<()> {
        self.inner.flush()
    }
}

/// Writes `rows` and returns the number of bytes written.
pub fn emit<W: Write>(rows: &[ResultRow], format: Format, writer: W) -> Result<usize> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let mut out = Counting {
        inner: writer,
        bytes: 0,
    };
    match format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut out);
            w.write_record(CSV_HEADER)?;
            for r in rows {
                w.write_record([
                    r.scenario_id.clone(),
                    r.axis.clone(),
                    format_number(r.axis_value),
                    r.axis2.clone().unwrap_or_default(),
                    cell(r.axis2_value),
                    r.metric.clone(),
                    cell(r.analytic),
                    cell(r.asymptotic),
                    cell(r.mc),
                    cell(r.ci_lo),
                    cell(r.ci_hi),
                    r.trials.map(|t| t.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        Format::Json => {
            let doc: Vec<JsonRow> = rows.iter().map(JsonRow::from).collect();
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.write_all(b"\n")?;
        }
    }
    out.flush()?;
    Ok(out.bytes)
}

/// Like [`emit`], but creates the file only when there is something to write.
pub fn emit_to_path(rows: &[ResultRow], format: Format, path: impl AsRef<Path>) -> Result<usize> {
    if rows.is_empty() {
        return Err(Error::EmptyRows);
    }
    let file = std::fs::File::create(path)?;
    emit(rows, format, std::io::BufWriter::new(file))
}
