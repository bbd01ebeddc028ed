//! Structured result emission.
//!
//! JSON is the canonical format: {"meta": {...}, "results": [...]} with
//! every float printed with 17 significant digits so payloads are exact
//! and byte-stable across runs. The timestamp lives only in `meta`;
//! identical config and seed give identical `results` bytes.
//!
//! CSV is a flat projection offered for the tabular experiments
//! (parity_scan and symmetry_suite).

use std::io::{self, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiments::{BenchmarkResult, OneWayResult, ParityRow, SolveRecord, SymmetryRow};

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub version: String,
    pub timestamp_unix_seconds: u64,
    pub resolved_config: RunConfig,
}

/// One experiment record; the variants match the experiment types.
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Record {
    Solve(SolveRecord),
    OneWay(OneWayResult),
    Benchmark(BenchmarkResult),
    Parity(ParityRow),
    Symmetry(SymmetryRow),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub meta: Meta,
    pub results: Vec<Record>,
}

impl Report {
    pub fn new(resolved_config: RunConfig, results: Vec<Record>) -> Self {
        let timestamp_unix_seconds = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Report {
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp_unix_seconds,
                resolved_config,
            },
            results,
        }
    }
}

/// `{:.16e}` gives one leading digit plus 16 fractional digits: 17
/// significant digits, enough to reproduce any f64 exactly.
pub fn format_float(value: f64) -> String {
    format!("{value:.16e}")
}

/// serde_json formatter that prints every f64 via [`format_float`].
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(format_float(value).as_bytes())
    }
}

/// Canonical JSON rendering (trailing newline included).
pub fn render_json<T: Serialize>(payload: &T) -> Result<String> {
    let mut buffer = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buffer, SignificantDigits);
    payload
        .serialize(&mut serializer)
        .map_err(|e| Error::Config(format!("serialization failed: {e}")))?;
    buffer.push(b'\n');
    String::from_utf8(buffer).map_err(|e| Error::Config(format!("non-utf8 output: {e}")))
}

/// A record type with a flat tabular projection.
pub trait CsvRow {
    fn headers() -> &'static [&'static str];
    fn values(&self) -> Vec<String>;
}

impl CsvRow for ParityRow {
    fn headers() -> &'static [&'static str] {
        &[
            "f",
            "energy_current_plus_f",
            "energy_current_minus_f",
            "spin_current_plus_f",
            "spin_current_minus_f",
            "energy_evenness_defect",
            "spin_oddness_defect",
        ]
    }

    fn values(&self) -> Vec<String> {
        vec![
            format_float(self.f),
            format_float(self.energy_current_plus_f),
            format_float(self.energy_current_minus_f),
            format_float(self.spin_current_plus_f),
            format_float(self.spin_current_minus_f),
            format_float(self.energy_evenness_defect),
            format_float(self.spin_oddness_defect),
        ]
    }
}

impl CsvRow for SymmetryRow {
    fn headers() -> &'static [&'static str] {
        &[
            "unitary",
            "drive",
            "n_sites",
            "theta",
            "draw",
            "hamiltonian_deviation",
            "dissipator_deviation",
            "current_deviation",
            "end_to_end_residual",
            "passed",
        ]
    }

    fn values(&self) -> Vec<String> {
        vec![
            self.unitary.clone(),
            self.drive.clone(),
            self.n_sites.to_string(),
            self.theta.map(format_float).unwrap_or_default(),
            self.draw.map(|d| d.to_string()).unwrap_or_default(),
            format_float(self.hamiltonian_deviation),
            format_float(self.dissipator_deviation),
            format_float(self.current_deviation),
            format_float(self.end_to_end_residual),
            self.passed.to_string(),
        ]
    }
}

/// Flat CSV rendering of a row list.
pub fn render_csv<R: CsvRow>(rows: &[R]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(R::headers())
        .map_err(|e| Error::Config(format!("csv write failed: {e}")))?;
    for row in rows {
        writer
            .write_record(row.values())
            .map_err(|e| Error::Config(format!("csv write failed: {e}")))?;
    }
    let buffer = writer
        .into_inner()
        .map_err(|e| Error::Config(format!("csv flush failed: {e}")))?;
    String::from_utf8(buffer).map_err(|e| Error::Config(format!("non-utf8 output: {e}")))
}

/// Write `text` to the path, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&str>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(Error::from)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn floats_carry_seventeen_significant_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(912.0 / 1017.0), "8.9675516224188789e-1");
        for value in [0.30000000000000004, 1e-10, 2668704.0 / 7699707.0, -0.05, 3.5e17] {
            let parsed: f64 = format_float(value).parse().unwrap();
            assert_eq!(parsed.to_bits(), value.to_bits(), "{value} mangled");
        }
    }

    #[test]
    fn json_uses_the_custom_float_format() {
        #[derive(Serialize)]
        struct S {
            x: f64,
            n: usize,
        }
        let text = render_json(&S { x: 0.1, n: 3 }).unwrap();
        assert_eq!(text, "{\"x\":1.0000000000000001e-1,\"n\":3}\n");
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["x"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn report_embeds_resolved_config() {
        let cfg = parse_config(r#"{"experiment": "symmetry_suite"}"#).unwrap();
        let report = Report::new(cfg.clone(), Vec::new());
        let text = render_json(&report).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["meta"]["version"].as_str().unwrap(), env!("CARGO_PKG_VERSION"));
        let embedded = serde_json::to_string(&value["meta"]["resolved_config"]).unwrap();
        let again = parse_config(&embedded).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn csv_projection_has_stable_header() {
        let rows = vec![ParityRow {
            f: 0.1,
            energy_current_plus_f: 1e-5,
            energy_current_minus_f: 1e-5,
            spin_current_plus_f: 0.01,
            spin_current_minus_f: -0.01,
            energy_evenness_defect: 0.0,
            spin_oddness_defect: 0.0,
        }];
        let text = render_csv(&rows).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "f,energy_current_plus_f,energy_current_minus_f,spin_current_plus_f,\
             spin_current_minus_f,energy_evenness_defect,spin_oddness_defect"
        );
        assert!(lines.next().unwrap().starts_with("1.0000000000000001e-1,"));
    }
}
