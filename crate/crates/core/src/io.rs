//! Versioned CSV tables and JSON datasets.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::model::ModelSpec;
use crate::quantum::{DosHistogram, SweepRow};
use crate::semiclassics::{DosCurve, SemiclassicalSpectrum};

pub const CSV_SCHEMA: u32 = 1;

/// Numeric table written as CSV with a `# schema=1` header and `# key=value`
/// metadata lines.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_model(mut self, spec: &ModelSpec) -> Self {
        self.meta.push(("m".into(), spec.m().to_string()));
        self.meta.push(("n".into(), spec.n().to_string()));
        self.meta.push(("N".into(), spec.particles().to_string()));
        self.meta.push(("eps".into(), format!("{:.16e}", spec.eps())));
        self.meta.push(("v".into(), format!("{:.16e}", spec.v())));
        self.meta.push(("eta".into(), format!("{:.16e}", spec.eta())));
        self
    }

    pub fn meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    /// Appends a row; panics if its width differs from the header.
    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from header");
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "# schema={CSV_SCHEMA}")?;
        for (k, v) in &self.meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        let mut line = String::new();
        for row in &self.rows {
            line.clear();
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    line.push(',');
                }
                line.push_str(&format_float(*x));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Fixed-width scientific notation; `nan` and `±inf` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.16e}")
    }
}

/// Everything computed for one model, in one serializable record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralDataset {
    pub spec: ModelSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub scaled_eigenvalues: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub semiclassical: Option<SemiclassicalSpectrum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histogram: Option<DosHistogram>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dos: Option<DosCurve>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepRow>,
}

impl SpectralDataset {
    pub fn new(spec: ModelSpec) -> Self {
        SpectralDataset {
            spec,
            scaled_eigenvalues: Vec::new(),
            semiclassical: None,
            histogram: None,
            dos: None,
            sweep: Vec::new(),
        }
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let spec = ModelSpec::new(2, 1, 4, 0.5, 1.0).unwrap();
        let mut t = CsvTable::new(["a", "b"]).with_model(&spec).meta("kind", "demo");
        t.push(vec![1.0, -0.25]);
        t.push(vec![f64::NAN, f64::NEG_INFINITY]);
        let text = t.to_csv_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# schema=1");
        assert!(lines.contains(&"# N=4"));
        assert!(lines.contains(&"# kind=demo"));
        assert!(lines.contains(&"a,b"));
        assert_eq!(lines[lines.len() - 2], "1.0000000000000000e0,-2.5000000000000000e-1");
        assert_eq!(lines[lines.len() - 1], "nan,-inf");
    }

    #[test]
    #[should_panic]
    fn csv_rejects_ragged_rows() {
        CsvTable::new(["a"]).push(vec![1.0, 2.0]);
    }
}
