//! Detection summaries and catalog expectation checks.

use std::fmt::Write;

use num_complex::Complex64;

use crate::corpus::{catalog_entry, Expected};
use crate::signature::{angle_diff, principal_arg};

use super::io::AnalysisTable;

/// Angular tolerance for a predicted signature.
pub const ANGLE_TOLERANCE: f64 = 0.05;

/// Detections farther than this many samples from every known feature count
/// as spurious.
pub const FEATURE_EXCLUSION: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Peak {
    pub index: usize,
    pub b: f64,
    pub label: String,
    pub arg: f64,
    pub abs_w: f64,
}

/// One peak (largest `|w̄|`) per circular run of detected rows.
pub fn peaks(table: &AnalysisTable) -> Vec<Peak> {
    let rows = &table.rows;
    let n = rows.len();
    let det: Vec<bool> = rows.iter().map(|r| r.detected()).collect();
    if det.iter().all(|&d| d) {
        let i = argmax(table, 0..n);
        return vec![peak(table, i)];
    }
    // start just after a non-detected row so runs do not straddle the seam
    let start = (0..n).find(|&i| !det[i]).map_or(0, |i| i + 1);
    let mut out = Vec::new();
    let mut run: Vec<usize> = Vec::new();
    for k in 0..n {
        let i = (start + k) % n;
        if det[i] {
            run.push(i);
        } else if !run.is_empty() {
            out.push(peak(table, argmax(table, run.drain(..))));
        }
    }
    if !run.is_empty() {
        out.push(peak(table, argmax(table, run.drain(..))));
    }
    out.sort_by_key(|p| p.index);
    out
}

fn argmax(table: &AnalysisTable, idx: impl IntoIterator<Item = usize>) -> usize {
    idx.into_iter()
        .fold(None, |best: Option<usize>, i| match best {
            Some(b) if table.rows[b].abs_w >= table.rows[i].abs_w => Some(b),
            _ => Some(i),
        })
        .unwrap_or(0)
}

fn peak(table: &AnalysisTable, i: usize) -> Peak {
    let r = &table.rows[i];
    Peak { index: i, b: r.b, label: r.label.clone(), arg: r.arg_sig, abs_w: r.abs_w }
}

fn circular_distance(a: usize, b: usize, n: usize) -> usize {
    let d = a.abs_diff(b) % n;
    d.min(n - d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalReport {
    pub text: String,
    pub passed: bool,
}

fn describe(z: Complex64) -> String {
    let named = [
        (Complex64::new(0.0, 1.0), "+i"),
        (Complex64::new(0.0, -1.0), "-i"),
        (Complex64::new(1.0, 0.0), "+1"),
        (Complex64::new(-1.0, 0.0), "-1"),
    ];
    named
        .iter()
        .find(|(w, _)| (w - z).norm() < 1e-12)
        .map_or_else(|| format!("{z}"), |(_, s)| s.to_string())
}

/// Lists the peaks of one table and, for catalog signals, checks the
/// prediction at the feature point and the absence of spurious detections.
pub fn report_table(source: &str, table: &AnalysisTable) -> SignalReport {
    let n = table.rows.len();
    let mut text = String::new();
    let detected = table.rows.iter().filter(|r| r.detected()).count();
    let _ = writeln!(text, "{source}: signal `{}`, {n} samples, {detected} detected positions", table.meta.signal);
    for p in peaks(table) {
        let _ = writeln!(text, "  peak b={:.6} label={} arg={:+.4} |w|={:.4}", p.b, p.label, p.arg, p.abs_w);
    }
    let Some(name) = table.meta.source.catalog.as_deref() else {
        let _ = writeln!(text, "  no catalog expectation");
        return SignalReport { text, passed: true };
    };
    let Some(entry) = catalog_entry(name, n) else {
        let _ = writeln!(text, "  FAIL unknown catalog entry `{name}`");
        return SignalReport { text, passed: false };
    };
    let position = table
        .meta
        .source
        .generator
        .as_ref()
        .map_or(entry.spec.position, |g| g.position);
    let b0 = ((position * n as f64).round() as usize) % n;
    let row = &table.rows[b0];
    let mut passed = true;
    match entry.at_feature {
        Expected::Sign(z) => {
            let err = angle_diff(row.arg_sig, principal_arg(z)).abs();
            let ok = row.detected() && err <= ANGLE_TOLERANCE;
            passed &= ok;
            let _ = writeln!(
                text,
                "  {} expected {} at b={:.6}: |w|={:.4} arg={:+.4} (error {:.4} rad)",
                if ok { "PASS" } else { "FAIL" },
                describe(z),
                row.b,
                row.abs_w,
                row.arg_sig,
                err
            );
        }
        Expected::Zero => {
            let ok = !row.detected();
            passed &= ok;
            let _ = writeln!(
                text,
                "  {} expected no detection at b={:.6}: |w|={:.4}",
                if ok { "PASS" } else { "FAIL" },
                row.b,
                row.abs_w
            );
        }
    }
    if entry.zero_elsewhere {
        let shift = position - entry.spec.position;
        let features: Vec<usize> = entry
            .features
            .iter()
            .map(|f| (((f + shift).rem_euclid(1.0) * n as f64).round() as usize) % n)
            .collect();
        let stray: Vec<usize> = (0..n)
            .filter(|&i| table.rows[i].detected())
            .filter(|&i| features.iter().all(|&f| circular_distance(i, f, n) > FEATURE_EXCLUSION))
            .collect();
        let ok = stray.is_empty();
        passed &= ok;
        if ok {
            let _ = writeln!(text, "  PASS no detections farther than {FEATURE_EXCLUSION} samples from known features");
        } else {
            let list: Vec<String> = stray.iter().take(8).map(|i| format!("{:.6}", table.rows[*i].b)).collect();
            let _ = writeln!(
                text,
                "  FAIL {} detection(s) away from known features, e.g. b={}",
                stray.len(),
                list.join(", ")
            );
        }
    }
    SignalReport { text, passed }
}
