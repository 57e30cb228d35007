//! CSV and JSON emission for experiment rows.
//!
//! CSV has a header row with the exact field names and one line per row; reals
//! carry 12 significant digits and integers are unquoted. JSON is an array of
//! flat objects keyed by the same field names.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub trait TableRow: Serialize {
    /// CSV header, in column order.
    const COLUMNS: &'static [&'static str];

    /// One CSV field per entry of [`Self::COLUMNS`].
    fn csv_record(&self) -> Vec<String>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown format '{other}', expected csv or json")),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Destination {
    #[default]
    Stdout,
    File(PathBuf),
}

impl Destination {
    fn path(&self) -> PathBuf {
        match self {
            Self::Stdout => PathBuf::from("<stdout>"),
            Self::File(p) => p.clone(),
        }
    }
}

/// Formats a real with 12 significant digits, `%.12g` style.
pub fn format_real(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..12).contains(&exp) {
        return format!("{}e{exp}", trim_fraction(mantissa));
    }
    let decimals = (11 - exp) as usize;
    trim_fraction(&format!("{v:.decimals$}")).to_string()
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_table<R: TableRow, W: Write>(
    rows: &[R],
    format: TableFormat,
    out: W,
) -> io::Result<()> {
    match format {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(R::COLUMNS)?;
            for row in rows {
                w.write_record(row.csv_record())?;
            }
            w.flush()
        }
        TableFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
            out.flush()
        }
    }
}

pub fn emit_table<R: TableRow>(rows: &[R], format: TableFormat, dest: &Destination) -> Result<()> {
    let res = match dest {
        Destination::Stdout => write_table(rows, format, io::stdout().lock()),
        Destination::File(path) => {
            File::create(path).and_then(|f| write_table(rows, format, BufWriter::new(f)))
        }
    };
    res.map_err(|source| Error::Io {
        path: dest.path(),
        source,
    })
}
