//! Number formatting shared by the JSON and CSV writers.
//!
//! Every float is written with 17 significant digits so that parsing the
//! output recovers the exact binary64 value.

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use recint::{ResidualReport64, Series64};

pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "Infinity".to_string()
    } else {
        "-Infinity".to_string()
    }
}

/// A float serialized as a raw JSON number token; non-finite values become `null`.
#[derive(Debug, Clone, Copy)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(fmt_num(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

#[derive(Debug, Serialize)]
pub struct SeriesOut {
    pub base_point: Num,
    pub coeffs: Vec<Num>,
}

impl From<&Series64> for SeriesOut {
    fn from(s: &Series64) -> Self {
        Self {
            base_point: Num(s.base_point()),
            coeffs: s.coeffs().iter().copied().map(Num).collect(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ResidualOut {
    pub verified_degree: usize,
    pub max_residual: Num,
    pub scale: Num,
    pub tolerance: Num,
    pub pass: bool,
}

impl From<&ResidualReport64> for ResidualOut {
    fn from(r: &ResidualReport64) -> Self {
        Self {
            verified_degree: r.verified_degree,
            max_residual: Num(r.max_residual),
            scale: Num(r.scale),
            tolerance: Num(r.tolerance_used),
            pass: r.passed(),
        }
    }
}

/// Residual summaries keyed by series name, in insertion order.
#[derive(Debug)]
pub struct ResidualMap(pub Vec<(String, ResidualOut)>);

impl From<&[(String, ResidualReport64)]> for ResidualMap {
    fn from(rs: &[(String, ResidualReport64)]) -> Self {
        Self(rs.iter().map(|(l, r)| (l.clone(), r.into())).collect())
    }
}

impl Serialize for ResidualMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter().map(|(k, v)| (k, v)))
    }
}

/// Rows of equal-length columns as CSV, header first.
pub fn write_csv_table(out: &mut String, header: &[&str], rows: &[Vec<String>]) {
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
}
