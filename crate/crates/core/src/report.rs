//! Report envelopes shared by the command-line subcommands.
//!
//! JSON reports are flat objects with the keys `spec`, `regime`, `rho_lower`,
//! `rho_upper`, `values`, `errors` and `provenance`. Floats are written in the
//! shortest form that parses back to the same `f64`, so a report re-serializes
//! byte for byte. CSV output follows RFC 4180 with LF line endings.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::processes::ProcessSpec;
use crate::theory::{Regime, RegimeReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub module: String,
    pub citation: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub spec: Option<ProcessSpec>,
    pub regime: Option<Regime>,
    pub rho_lower: Option<f64>,
    pub rho_upper: Option<f64>,
    pub values: Map<String, Value>,
    pub errors: Map<String, Value>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(module: &str, citation: &str) -> Self {
        Report {
            spec: None,
            regime: None,
            rho_lower: None,
            rho_upper: None,
            values: Map::new(),
            errors: Map::new(),
            provenance: Provenance { module: module.into(), citation: citation.into() },
        }
    }

    /// Attaches the process together with its regime entry.
    pub fn with_regime(mut self, spec: ProcessSpec, regime: &RegimeReport) -> Self {
        self.spec = Some(spec);
        self.regime = Some(regime.regime);
        self.rho_lower = regime.rho_lower;
        self.rho_upper = regime.rho_upper;
        self
    }

    pub fn with_spec(mut self, spec: ProcessSpec) -> Self {
        self.spec = Some(spec);
        self
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values.insert(key.into(), to_value(v));
        self
    }

    pub fn error(mut self, key: &str, v: impl Serialize) -> Self {
        self.errors.insert(key.into(), to_value(v));
        self
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Data(format!("malformed report: {e}")))
    }
}

fn to_value(v: impl Serialize) -> Value {
    // non-finite floats have no JSON form and become null
    serde_json::to_value(v).unwrap_or(Value::Null)
}

/// Seventeen significant digits, enough to recover any `f64`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes a header and rows as CSV with LF line endings.
pub fn write_csv<W: Write>(out: W, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
