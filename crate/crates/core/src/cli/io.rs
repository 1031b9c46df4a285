//! Signal and analysis-table file formats.
//!
//! CSV files start with `#` comment lines, one of which is `# meta <json>`,
//! followed by a header row. Floats are written with 17 significant digits
//! so that a print/parse cycle is lossless.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::GeneratorSpec;
use crate::error::{Error, Result};
use crate::signature::{symmetry_label, SignatureField};
use crate::transform::Signal;

use super::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    /// `.json` selects JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SignalMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalFile {
    pub name: String,
    pub n: usize,
    pub samples: Vec<f64>,
    #[serde(default)]
    pub meta: SignalMeta,
}

impl SignalFile {
    pub fn new(signal: &Signal, meta: SignalMeta) -> Self {
        Self {
            name: signal.label().to_string(),
            n: signal.len(),
            samples: signal.samples().to_vec(),
            meta,
        }
    }

    pub fn signal(&self) -> Result<Signal> {
        if self.samples.len() != self.n {
            return Err(Error::Parse(format!("declared {} samples, found {}", self.n, self.samples.len())));
        }
        Signal::new(self.samples.clone(), self.name.clone())
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let meta = serde_json::json!({ "name": self.name, "n": self.n, "meta": self.meta });
                let mut out = String::new();
                out.push_str("# wavesign signal\n");
                out.push_str(&format!("# meta {meta}\n"));
                out.push_str("x,f\n");
                for (i, v) in self.samples.iter().enumerate() {
                    let x = i as f64 / self.n as f64;
                    out.push_str(&format!("{},{}\n", fmt_f64(x), fmt_f64(*v)));
                }
                Ok(out)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Parse(format!("signal JSON: {e}")));
        }
        let (meta, rows) = split_csv(text, &["x", "f"])?;
        let samples: Vec<f64> = rows.iter().map(|r| r[1]).collect();
        let (name, signal_meta) = match meta {
            Some(m) => {
                let name = m.get("name").and_then(|v| v.as_str()).unwrap_or("").to_string();
                let sm = match m.get("meta") {
                    Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("signal meta: {e}")))?,
                    None => SignalMeta::default(),
                };
                (name, sm)
            }
            None => (String::new(), SignalMeta::default()),
        };
        Ok(Self { name, n: samples.len(), samples, meta: signal_meta })
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Splits a CSV document into its `# meta` JSON (if any) and numeric rows,
/// checking the header.
fn split_csv(text: &str, header: &[&str]) -> Result<(Option<serde_json::Value>, Vec<Vec<f64>>)> {
    split_csv_with_text(text, header, None).map(|(m, rows, _)| (m, rows))
}

type CsvParts = (Option<serde_json::Value>, Vec<Vec<f64>>, Vec<String>);

/// Like [`split_csv`], but column `text_col` is returned as strings.
fn split_csv_with_text(text: &str, header: &[&str], text_col: Option<usize>) -> Result<CsvParts> {
    let mut meta = None;
    let mut seen_header = false;
    let mut rows = Vec::new();
    let mut texts = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(c) = line.strip_prefix('#') {
            if let Some(js) = c.trim_start().strip_prefix("meta ") {
                meta = Some(serde_json::from_str(js).map_err(|e| Error::Parse(format!("line {}: meta: {e}", lineno + 1)))?);
            }
            continue;
        }
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if !seen_header {
            if cells != header {
                return Err(Error::Parse(format!(
                    "line {}: expected header `{}`, found `{line}`",
                    lineno + 1,
                    header.join(",")
                )));
            }
            seen_header = true;
            continue;
        }
        if cells.len() != header.len() {
            return Err(Error::Parse(format!("line {}: expected {} fields, found {}", lineno + 1, header.len(), cells.len())));
        }
        let mut row = Vec::with_capacity(cells.len());
        for (i, c) in cells.iter().enumerate() {
            if Some(i) == text_col {
                texts.push(c.to_string());
                row.push(f64::NAN);
                continue;
            }
            let v: f64 = c.parse().map_err(|_| Error::Parse(format!("line {}: `{c}` is not a number", lineno + 1)))?;
            row.push(v);
        }
        rows.push(row);
    }
    if !seen_header {
        return Err(Error::Parse(format!("missing header `{}`", header.join(","))));
    }
    Ok((meta, rows, texts))
}

pub const ANALYSIS_COLUMNS: [&str; 9] = ["b", "re_w", "im_w", "abs_w", "rho", "sig_re", "sig_im", "arg_sig", "label"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRow {
    pub b: f64,
    pub re_w: f64,
    pub im_w: f64,
    pub abs_w: f64,
    pub rho: f64,
    pub sig_re: f64,
    pub sig_im: f64,
    pub arg_sig: f64,
    pub label: String,
}

impl AnalysisRow {
    pub fn detected(&self) -> bool {
        self.sig_re != 0.0 || self.sig_im != 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisMeta {
    pub signal: String,
    #[serde(default)]
    pub source: SignalMeta,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisTable {
    pub meta: AnalysisMeta,
    pub rows: Vec<AnalysisRow>,
}

impl AnalysisTable {
    /// Builds rows from a signature field. With `keep`, detections not in
    /// the list keep their resultant but report a zero signature.
    pub fn from_field(field: &SignatureField, keep: Option<&[usize]>, meta: AnalysisMeta) -> Self {
        let n = field.len();
        let mut keep_mask = vec![true; n];
        if let Some(k) = keep {
            keep_mask = vec![false; n];
            for &i in k {
                keep_mask[i] = true;
            }
        }
        let rows = (0..n)
            .map(|i| {
                let w = field.mean_resultant[i];
                let s = if keep_mask[i] { field.signature[i] } else { crate::signature::ComplexSign::ZERO };
                let label = symmetry_label(s).map_or("none".to_string(), |l| l.label.to_string());
                AnalysisRow {
                    b: i as f64 / n as f64,
                    re_w: w.re,
                    im_w: w.im,
                    abs_w: field.resultant_modulus[i],
                    rho: field.directional_variance[i],
                    sig_re: s.value().re,
                    sig_im: s.value().im,
                    arg_sig: s.arg(),
                    label,
                }
            })
            .collect();
        Self { meta, rows }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => {
                let meta = serde_json::to_string(&self.meta).map_err(|e| Error::Parse(e.to_string()))?;
                let mut out = String::new();
                out.push_str("# wavesign analysis\n");
                out.push_str(&format!("# meta {meta}\n"));
                out.push_str(&ANALYSIS_COLUMNS.join(","));
                out.push('\n');
                for r in &self.rows {
                    let nums = [r.b, r.re_w, r.im_w, r.abs_w, r.rho, r.sig_re, r.sig_im, r.arg_sig];
                    let cells: Vec<String> = nums.iter().map(|v| fmt_f64(*v)).collect();
                    out.push_str(&cells.join(","));
                    out.push(',');
                    out.push_str(&r.label);
                    out.push('\n');
                }
                Ok(out)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).map_err(|e| Error::Parse(format!("analysis JSON: {e}")));
        }
        let (meta, rows, labels) = split_csv_with_text(text, &ANALYSIS_COLUMNS, Some(8))?;
        let meta = meta.ok_or_else(|| Error::Parse("analysis table has no `# meta` line".into()))?;
        let meta: AnalysisMeta = serde_json::from_value(meta).map_err(|e| Error::Parse(format!("analysis meta: {e}")))?;
        let rows = rows
            .into_iter()
            .zip(labels)
            .map(|(r, label)| AnalysisRow {
                b: r[0],
                re_w: r[1],
                im_w: r[2],
                abs_w: r[3],
                rho: r[4],
                sig_re: r[5],
                sig_im: r[6],
                arg_sig: r[7],
                label,
            })
            .collect();
        Ok(Self { meta, rows })
    }
}
