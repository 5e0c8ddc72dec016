//! Output records and their CSV, JSON and plain encodings.

use std::io::{self, Write};

use mathieu_core::ineq::CheckReport;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

/// One computed quantity. Complex values use both `value_re` and
/// `value_im`; real values leave `value_im` empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub command: String,
    /// `key=value` pairs joined by `;`.
    pub inputs: String,
    pub method: String,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub error_bound: Option<f64>,
    pub terms: Option<u64>,
    pub note: String,
    pub wall_time_ms: f64,
}

pub const RECORD_HEADER: [&str; 9] = [
    "command",
    "inputs",
    "method",
    "value_re",
    "value_im",
    "error_bound",
    "terms",
    "note",
    "wall_time_ms",
];

/// Flat form of a [`CheckReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check_id: String,
    pub grid: String,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub margin: Option<f64>,
    pub error_budget: Option<f64>,
    pub verdict: String,
    pub notes: String,
}

pub const CHECK_HEADER: [&str; 8] = [
    "check_id",
    "grid",
    "lhs",
    "rhs",
    "margin",
    "error_budget",
    "verdict",
    "notes",
];

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl From<&CheckReport> for CheckRow {
    fn from(r: &CheckReport) -> Self {
        CheckRow {
            check_id: r.check_id.clone(),
            grid: r
                .grid_point
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(";"),
            lhs: finite(r.lhs),
            rhs: finite(r.rhs),
            margin: finite(r.margin),
            error_budget: finite(r.error_budget),
            verdict: r.verdict.to_string(),
            notes: r.notes.join(" | "),
        }
    }
}

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub fn inputs(pairs: &[(&str, String)]) -> String {
    pairs
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

impl OutputRecord {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.command.clone(),
            self.inputs.clone(),
            self.method.clone(),
            fmt_opt(self.value_re),
            fmt_opt(self.value_im),
            fmt_opt(self.error_bound),
            self.terms.map(|t| t.to_string()).unwrap_or_default(),
            self.note.clone(),
            fmt_f64(self.wall_time_ms),
        ]
    }

    fn plain(&self) -> String {
        let mut s = format!("{} [{}]", self.method, self.inputs);
        match (self.value_re, self.value_im) {
            (Some(re), Some(im)) => s += &format!(" = {} {:+}i", fmt_f64(re), im),
            (Some(re), None) => s += &format!(" = {}", fmt_f64(re)),
            _ => {}
        }
        if let Some(e) = self.error_bound {
            s += &format!(" ± {e:.3e}");
        }
        if let Some(t) = self.terms {
            s += &format!(" ({t} terms/nodes)");
        }
        if !self.note.is_empty() {
            s += &format!(" {}", self.note);
        }
        s
    }
}

impl CheckRow {
    fn csv_fields(&self) -> Vec<String> {
        vec![
            self.check_id.clone(),
            self.grid.clone(),
            fmt_opt(self.lhs),
            fmt_opt(self.rhs),
            fmt_opt(self.margin),
            fmt_opt(self.error_budget),
            self.verdict.clone(),
            self.notes.clone(),
        ]
    }

    fn plain(&self) -> String {
        let mut s = format!("{:<12} {:<12} [{}]", self.check_id, self.verdict, self.grid);
        if let (Some(m), Some(b)) = (self.margin, self.error_budget) {
            s += &format!(" margin {m:.6e} budget {b:.3e}");
        }
        if !self.notes.is_empty() {
            s += &format!(" {}", self.notes);
        }
        s
    }
}

fn write_csv<W: Write>(
    out: W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<String>>,
) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()
}

fn write_json<W: Write, T: Serialize>(mut out: W, rows: &[T]) -> io::Result<()> {
    for r in rows {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Records in the chosen format. JSON is one object per line.
pub fn write_records<W: Write>(
    mut out: W,
    format: Format,
    rows: &[OutputRecord],
) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(
            out,
            &RECORD_HEADER,
            rows.iter().map(OutputRecord::csv_fields),
        ),
        Format::Json => write_json(out, rows),
        Format::Plain => {
            for r in rows {
                writeln!(out, "{}", r.plain())?;
            }
            Ok(())
        }
    }
}

pub fn write_checks<W: Write>(mut out: W, format: Format, rows: &[CheckRow]) -> io::Result<()> {
    match format {
        Format::Csv => write_csv(out, &CHECK_HEADER, rows.iter().map(CheckRow::csv_fields)),
        Format::Json => write_json(out, rows),
        Format::Plain => {
            for r in rows {
                writeln!(out, "{}", r.plain())?;
            }
            Ok(())
        }
    }
}

/// Parses CSV or JSON output back into rows.
pub fn read_rows<T: for<'de> Deserialize<'de>>(
    text: &str,
    format: Format,
) -> Result<Vec<T>, String> {
    match format {
        Format::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<Vec<T>, _>>()
            .map_err(|e| e.to_string()),
        Format::Json => text
            .lines()
            .map(|l| serde_json::from_str(l).map_err(|e| e.to_string()))
            .collect(),
        Format::Plain => Err("plain output is not machine-readable".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec() -> OutputRecord {
        OutputRecord {
            command: "eval".into(),
            inputs: "r=1;z=0.5".into(),
            method: "series".into(),
            value_re: Some(0.1 + 0.2),
            value_im: None,
            error_bound: Some(1e-300),
            terms: Some(12),
            note: "a, \"quoted\" note".into(),
            wall_time_ms: 0.125,
        }
    }

    #[test]
    fn csv_and_json_round_trip() {
        for format in [Format::Csv, Format::Json] {
            let mut a = Vec::new();
            write_records(&mut a, format, &[rec(), rec()]).unwrap();
            let text = String::from_utf8(a.clone()).unwrap();
            let rows: Vec<OutputRecord> = read_rows(&text, format).unwrap();
            assert_eq!(rows[0], rec());
            let mut b = Vec::new();
            write_records(&mut b, format, &rows).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
