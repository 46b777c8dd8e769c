//! Data-file writers. Everything written here is a pure function of the
//! scenario config, so repeated runs produce identical bytes.

use std::io::Write;
use std::path::{Path, PathBuf};

use tempfile::NamedTempFile;

use crate::error::CliError;

/// Trace file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum TraceFormat {
    #[default]
    Csv,
    Json,
}

impl TraceFormat {
    pub fn extension(self) -> &'static str {
        match self {
            TraceFormat::Csv => "csv",
            TraceFormat::Json => "json",
        }
    }
}

/// `%.9g`: 9 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e9)`.
pub fn fmt_sig(v: f64) -> String {
    const DIGITS: i32 = 9;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}"))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Tabular trace: header plus numeric rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|v| fmt_sig(*v)))
                .expect("in-memory write");
        }
        w.into_inner().expect("in-memory flush")
    }

    /// `{"columns": [...], "rows": [[...], ...]}`, keeping column order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "columns": self.header,
            "rows": self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| json_number(*v)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, format: TraceFormat) -> Vec<u8> {
        match format {
            TraceFormat::Csv => self.to_csv(),
            TraceFormat::Json => {
                let mut s = serde_json::to_vec_pretty(&self.to_json()).expect("json");
                s.push(b'\n');
                s
            }
        }
    }
}

pub fn json_number(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(v)
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let io = |path: &Path| {
        let p = path.display().to_string();
        move |source| CliError::Io { path: p, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let target = dir.join(name);
    let mut tmp = NamedTempFile::new_in(dir).map_err(io(dir))?;
    tmp.write_all(bytes).map_err(io(&target))?;
    tmp.as_file().sync_all().map_err(io(&target))?;
    tmp.persist(&target).map_err(|e| CliError::Io {
        path: target.display().to_string(),
        source: e.error,
    })?;
    Ok(target)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(54.0), "54");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(6.030912345678), "6.03091235");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig(0.000123456789012), "0.000123456789");
        assert_eq!(fmt_sig(1.5e-7), "1.5e-07");
        assert_eq!(fmt_sig(123456789.0), "123456789");
        assert_eq!(fmt_sig(1234567890.0), "1.23456789e+09");
        assert_eq!(fmt_sig(9.9999999999), "10");
    }

    #[test]
    fn csv_has_lf_and_header() {
        let mut t = Table::new(vec!["iter".into(), "x".into()]);
        t.push(vec![1.0, 0.5]);
        let s = String::from_utf8(t.to_csv()).unwrap();
        assert_eq!(s, "iter,x\n1,0.5\n");
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        write_atomic(dir.path(), "a.txt", b"one").unwrap();
        let p = write_atomic(dir.path(), "a.txt", b"two").unwrap();
        assert_eq!(std::fs::read(p).unwrap(), b"two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
