//! CSV and JSON output of spectrum records, with atomic writes.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use super::config::OutputFormat;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "p_par,p_perp,phi_p,re_a,im_a,prob,channel_tag";

/// One output row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRecord {
    pub p_par: f64,
    pub p_perp: f64,
    pub phi_p: f64,
    pub re_a: f64,
    pub im_a: f64,
    pub prob: f64,
    pub channel_tag: String,
}

impl SpectrumRecord {
    pub fn new(p: &crate::types::Momentum, a: num_complex::Complex64, tag: impl Into<String>) -> Self {
        Self {
            p_par: p.p_par,
            p_perp: p.p_perp,
            phi_p: p.phi_p,
            re_a: a.re,
            im_a: a.im,
            prob: a.norm_sqr(),
            channel_tag: tag.into(),
        }
    }

    /// Bitwise equality that treats NaN as equal to NaN.
    pub fn same_bits(&self, other: &Self) -> bool {
        let f = |a: f64, b: f64| a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan());
        f(self.p_par, other.p_par)
            && f(self.p_perp, other.p_perp)
            && f(self.phi_p, other.phi_p)
            && f(self.re_a, other.re_a)
            && f(self.im_a, other.im_a)
            && f(self.prob, other.prob)
            && self.channel_tag == other.channel_tag
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(records: &[SpectrumRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        let fields = [r.p_par, r.p_perp, r.phi_p, r.re_a, r.im_a, r.prob].map(float);
        out.push_str(&fields.join(","));
        out.push(',');
        out.push_str(&r.channel_tag);
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SpectrumRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Config(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let parts: Vec<&str> = line.splitn(7, ',').collect();
            if parts.len() != 7 {
                return Err(Error::Config(format!("line {}: expected 7 fields", i + 2)));
            }
            let num = |k: usize| {
                parts[k]
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("line {}: field {k}: {e}", i + 2)))
            };
            Ok(SpectrumRecord {
                p_par: num(0)?,
                p_perp: num(1)?,
                phi_p: num(2)?,
                re_a: num(3)?,
                im_a: num(4)?,
                prob: num(5)?,
                channel_tag: parts[6].to_string(),
            })
        })
        .collect()
}

fn json_float(x: f64) -> Value {
    Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn to_json(records: &[SpectrumRecord]) -> Result<String> {
    let rows: Vec<Value> = records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            m.insert("p_par".into(), json_float(r.p_par));
            m.insert("p_perp".into(), json_float(r.p_perp));
            m.insert("phi_p".into(), json_float(r.phi_p));
            m.insert("re_a".into(), json_float(r.re_a));
            m.insert("im_a".into(), json_float(r.im_a));
            m.insert("prob".into(), json_float(r.prob));
            m.insert("channel_tag".into(), Value::String(r.channel_tag.clone()));
            Value::Object(m)
        })
        .collect();
    serde_json::to_string_pretty(&Value::Array(rows)).map_err(|e| Error::Io(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Vec<SpectrumRecord>> {
    let rows: Vec<Map<String, Value>> =
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    rows.into_iter()
        .map(|m| {
            let num = |k: &str| match m.get(k) {
                Some(Value::Null) => Ok(f64::NAN),
                Some(Value::Number(n)) => n
                    .as_f64()
                    .ok_or_else(|| Error::Config(format!("{k}: bad number"))),
                _ => Err(Error::Config(format!("missing numeric field {k}"))),
            };
            let tag = match m.get("channel_tag") {
                Some(Value::String(s)) => s.clone(),
                _ => return Err(Error::Config("missing channel_tag".into())),
            };
            Ok(SpectrumRecord {
                p_par: num("p_par")?,
                p_perp: num("p_perp")?,
                phi_p: num("phi_p")?,
                re_a: num("re_a")?,
                im_a: num("im_a")?,
                prob: num("prob")?,
                channel_tag: tag,
            })
        })
        .collect()
}

pub fn render(records: &[SpectrumRecord], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(to_csv(records)),
        OutputFormat::Json => to_json(records),
    }
}

/// Writes the records to `path` through a temporary file in the same
/// directory that is renamed into place.
pub fn emit(records: &[SpectrumRecord], format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = render(records, format)?;
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error.to_string()))?;
    Ok(())
}
