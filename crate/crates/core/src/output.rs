//! Plain-text serialization of momentum tables.
//!
//! CSV is meant for plotting pipelines, JSON for tooling. Floats are
//! printed with 17 significant digits (`{:.16e}`), which round-trips every
//! f64 bit pattern, and lines end with `\n` only, so identical inputs
//! produce byte-identical files on every platform.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::momentum::{AmplitudeTable, MomentumGrid};

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("expected header {expected:?}, found {found:?}")]
    HeaderMismatch { expected: &'static str, found: String },
    #[error("line {line}: expected {expected} comma-separated fields, found {found}")]
    FieldCount { line: usize, expected: usize, found: usize },
    #[error("line {line}: cannot parse {text:?} as a number")]
    BadNumber { line: usize, text: String },
}

/// 17-significant-digit scientific notation: lossless for f64.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_float(line: usize, text: &str) -> Result<f64, OutputError> {
    text.trim()
        .parse::<f64>()
        .map_err(|_| OutputError::BadNumber { line, text: text.to_string() })
}

const DENSITY_HEADER: &str = "k,density";
const AMPLITUDE_HEADER: &str = "k,re_q,im_q";

/// CSV with header `k,density`.
pub fn density_csv(rows: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(48 * (rows.len() + 1));
    out.push_str(DENSITY_HEADER);
    out.push('\n');
    for &(k, d) in rows {
        out.push_str(&format_float(k));
        out.push(',');
        out.push_str(&format_float(d));
        out.push('\n');
    }
    out
}

/// CSV with header `k,re_q,im_q`.
pub fn amplitude_csv(rows: &[(f64, Complex64)]) -> String {
    let mut out = String::with_capacity(72 * (rows.len() + 1));
    out.push_str(AMPLITUDE_HEADER);
    out.push('\n');
    for &(k, q) in rows {
        out.push_str(&format_float(k));
        out.push(',');
        out.push_str(&format_float(q.re));
        out.push(',');
        out.push_str(&format_float(q.im));
        out.push('\n');
    }
    out
}

fn csv_body<'a>(
    text: &'a str,
    expected_header: &'static str,
) -> Result<impl Iterator<Item = (usize, &'a str)>, OutputError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == expected_header => {}
        Some((_, header)) => {
            return Err(OutputError::HeaderMismatch {
                expected: expected_header,
                found: header.to_string(),
            })
        }
        None => {
            return Err(OutputError::HeaderMismatch {
                expected: expected_header,
                found: String::new(),
            })
        }
    }
    Ok(lines.filter(|(_, l)| !l.trim().is_empty()))
}

/// Inverse of [`density_csv`]; exact round trip.
pub fn parse_density_csv(text: &str) -> Result<Vec<(f64, f64)>, OutputError> {
    let mut rows = Vec::new();
    for (i, line) in csv_body(text, DENSITY_HEADER)? {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 2 {
            return Err(OutputError::FieldCount { line: i + 1, expected: 2, found: fields.len() });
        }
        rows.push((parse_float(i + 1, fields[0])?, parse_float(i + 1, fields[1])?));
    }
    Ok(rows)
}

/// Inverse of [`amplitude_csv`]; exact round trip.
pub fn parse_amplitude_csv(text: &str) -> Result<Vec<(f64, Complex64)>, OutputError> {
    let mut rows = Vec::new();
    for (i, line) in csv_body(text, AMPLITUDE_HEADER)? {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(OutputError::FieldCount { line: i + 1, expected: 3, found: fields.len() });
        }
        rows.push((
            parse_float(i + 1, fields[0])?,
            Complex64::new(parse_float(i + 1, fields[1])?, parse_float(i + 1, fields[2])?),
        ));
    }
    Ok(rows)
}

/// Grid summary stored in JSON metadata.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridInfo {
    pub k_min: f64,
    pub k_max: f64,
    pub step: f64,
    pub points: usize,
}

impl GridInfo {
    pub fn describe(grid: &MomentumGrid) -> Self {
        let k = &grid.k_values;
        let step = if k.len() > 1 { k[1] - k[0] } else { 0.0 };
        Self { k_min: k[0], k_max: k[k.len() - 1], step, points: k.len() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableMetadata {
    pub l: u32,
    pub m: i32,
    pub source: String,
    pub grid: GridInfo,
}

impl TableMetadata {
    fn of(table: &AmplitudeTable) -> Self {
        Self {
            l: table.index.l,
            m: table.index.m,
            source: table.source.name().to_string(),
            grid: GridInfo::describe(&table.grid),
        }
    }
}

/// JSON mirror of the density CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityDocument {
    pub metadata: TableMetadata,
    pub k: Vec<f64>,
    pub density: Vec<f64>,
}

impl DensityDocument {
    pub fn new(table: &AmplitudeTable) -> Self {
        Self {
            metadata: TableMetadata::of(table),
            k: table.grid.k_values.clone(),
            density: table.densities(),
        }
    }
}

/// JSON mirror of the amplitude CSV.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AmplitudeDocument {
    pub metadata: TableMetadata,
    pub k: Vec<f64>,
    pub re_q: Vec<f64>,
    pub im_q: Vec<f64>,
}

impl AmplitudeDocument {
    pub fn new(table: &AmplitudeTable) -> Self {
        Self {
            metadata: TableMetadata::of(table),
            k: table.grid.k_values.clone(),
            re_q: table.values.iter().map(|v| v.re).collect(),
            im_q: table.values.iter().map(|v| v.im).collect(),
        }
    }
}
