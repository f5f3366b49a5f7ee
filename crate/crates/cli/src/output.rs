//! CSV and JSON tables.
//!
//! CSV files carry a fixed header and one newline-terminated record per
//! row; JSON files hold `{"metadata": …, "rows": […]}` with the same keys
//! as the CSV columns. Floats use the shortest representation that parses
//! back to the same value, so parse-then-emit is byte-identical.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use srsqueeze_core::sweep::ResultRow;
use srsqueeze_core::ValidityFlags;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// A row type with a fixed column order.
pub trait Tabular: Serialize + DeserializeOwned {
    const HEADER: &'static [&'static str];
}

pub fn flags_to_string(flags: ValidityFlags) -> String {
    flags.names().collect::<Vec<_>>().join("|")
}

pub fn flags_from_str(s: &str) -> Option<ValidityFlags> {
    let mut flags = ValidityFlags::empty();
    for name in s.split('|').filter(|n| !n.is_empty()) {
        flags.insert(ValidityFlags::from_name(name)?);
    }
    Some(flags)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub detuning_gamma0: f64,
    pub alpha_ell: f64,
    pub g_ell: f64,
    pub squeezing_db: Option<f64>,
    pub flags: String,
}

impl Tabular for SweepRow {
    const HEADER: &'static [&'static str] = &["detuning_gamma0", "alpha_ell", "g_ell", "squeezing_db", "flags"];
}

impl From<&ResultRow> for SweepRow {
    fn from(r: &ResultRow) -> Self {
        Self {
            detuning_gamma0: r.detuning_gamma0,
            alpha_ell: r.alpha_ell,
            g_ell: r.g_ell,
            squeezing_db: r.squeezing_db,
            flags: flags_to_string(r.flags),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRow {
    pub chi: f64,
    pub variance: f64,
    pub lossless_variance: f64,
    pub mc_variance: Option<f64>,
    pub mc_std_error: Option<f64>,
}

impl Tabular for QuadratureRow {
    const HEADER: &'static [&'static str] = &["chi", "variance", "lossless_variance", "mc_variance", "mc_std_error"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KappaRow {
    pub kappa: f64,
    pub detuning_gamma0: f64,
    pub g_over_alpha: f64,
    pub squeezing_db: f64,
    pub flags: String,
}

impl Tabular for KappaRow {
    const HEADER: &'static [&'static str] = &["kappa", "detuning_gamma0", "g_over_alpha", "squeezing_db", "flags"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BufferRow {
    pub buffer_density: f64,
    pub gamma_prime: f64,
    pub gamma0_prime: f64,
    pub kappa_ratio: f64,
}

impl Tabular for BufferRow {
    const HEADER: &'static [&'static str] = &["buffer_density", "gamma_prime", "gamma0_prime", "kappa_ratio"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumRow {
    pub detuning_gamma0: f64,
    pub g_over_alpha: f64,
    pub density: f64,
    pub alpha0_ell: f64,
    pub squeezing_db: f64,
    pub chi_opt: f64,
}

impl Tabular for OptimumRow {
    const HEADER: &'static [&'static str] = &["detuning_gamma0", "g_over_alpha", "density", "alpha0_ell", "squeezing_db", "chi_opt"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub model: String,
    pub tool_version: String,
    pub parameters: BTreeMap<String, f64>,
}

impl Metadata {
    pub fn new(model: impl Into<String>) -> Self {
        Self { model: model.into(), tool_version: env!("CARGO_PKG_VERSION").into(), parameters: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.into(), value);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "R: Tabular")]
pub struct Document<R> {
    pub metadata: Metadata,
    pub rows: Vec<R>,
}

pub fn write_csv<R: Tabular, W: Write>(out: W, rows: &[R]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(R::HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Tabular>(text: &str) -> std::result::Result<Vec<R>, csv::Error> {
    csv::Reader::from_reader(text.as_bytes()).deserialize().collect()
}

pub fn write_json<R: Tabular, W: Write>(mut out: W, doc: &Document<R>) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, doc)?;
    out.write_all(b"\n")
}

pub fn read_json<R: Tabular>(text: &str) -> serde_json::Result<Document<R>> {
    serde_json::from_str(text)
}

pub fn render<R: Tabular>(doc: &Document<R>, format: Format) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&mut buf, &doc.rows).map_err(|e| CliError::io("writing CSV", e.into()))?,
        Format::Json => write_json(&mut buf, doc).map_err(|e| CliError::io("writing JSON", e))?,
    }
    Ok(buf)
}

/// Write to `path`, or to standard output when it is None.
pub fn emit<R: Tabular>(doc: &Document<R>, format: Format, path: Option<&Path>) -> Result<()> {
    let bytes = render(doc, format)?;
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::io(format!("writing {}", p.display()), e)),
        None => std::io::stdout().lock().write_all(&bytes).map_err(|e| CliError::io("writing to standard output", e)),
    }
}
