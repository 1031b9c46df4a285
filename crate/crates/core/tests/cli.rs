use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;
use std::process::{Command, Output};

use wavesign::cli::io::{AnalysisTable, SignalFile};

fn wavesign(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavesign"))
        .args(args)
        .current_dir(dir)
        .env_remove(wavesign::cli::OUT_DIR_ENV)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> Output {
    let out = wavesign(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn table(dir: &Path, name: &str) -> AnalysisTable {
    AnalysisTable::parse(&std::fs::read_to_string(dir.join(name)).unwrap()).unwrap()
}

#[test]
fn generate_step_csv() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "step", "--pos", "0.5", "--n", "1024", "-o", "s.csv"]);
    let text = std::fs::read_to_string(d.path().join("s.csv")).unwrap();
    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data[0], "x,f");
    assert_eq!(data.len(), 1025);
    let f = SignalFile::parse(&text).unwrap();
    assert_eq!(f.samples[511], 0.0);
    assert_eq!(f.samples[512], 0.5);
    assert_eq!(f.samples[513], 1.0);
}

#[test]
fn json_signal_roundtrips_through_analyze() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "cusp", "--gamma", "3", "-o", "c.json"]);
    let text = std::fs::read_to_string(d.path().join("c.json")).unwrap();
    let f: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(f["n"], 1024);
    assert_eq!(f["samples"].as_array().unwrap().len(), 1024);
    ok(d.path(), &["analyze", "c.json", "-o", "c.table.json"]);
    let t = table(d.path(), "c.table.json");
    assert!(t.rows[512].detected());
    assert!(t.rows[512].arg_sig.abs() < 0.05);
}

#[test]
fn csv_print_parse_is_lossless() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "weierstrass", "--r", "0.35", "--t", "9", "-o", "w.csv"]);
    let first = std::fs::read_to_string(d.path().join("w.csv")).unwrap();
    let parsed = SignalFile::parse(&first).unwrap();
    assert_eq!(parsed.render(wavesign::cli::io::Format::Csv).unwrap(), first);
}

#[test]
fn analyze_columns_and_step_row() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "step", "-o", "s.csv"]);
    ok(d.path(), &["analyze", "s.csv", "-o", "t.csv"]);
    let text = std::fs::read_to_string(d.path().join("t.csv")).unwrap();
    assert!(text.lines().any(|l| l == "b,re_w,im_w,abs_w,rho,sig_re,sig_im,arg_sig,label"));
    let t = table(d.path(), "t.csv");
    assert!(t.rows[512].abs_w >= 0.99);
    assert!((t.rows[512].arg_sig - FRAC_PI_2).abs() < 0.05);
    assert_eq!(t.rows[512].label, "step-up");
    assert_eq!(t.meta.config.n, 1024);
}

#[test]
fn cusp_and_polynomial_tables() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "cusp", "--gamma", "0.5", "-o", "c.csv"]);
    ok(d.path(), &["analyze", "c.csv", "-o", "c.t.csv"]);
    let t = table(d.path(), "c.t.csv");
    assert!((t.rows[512].arg_sig - PI).abs() < 0.05);

    ok(d.path(), &["generate", "--kind", "polynomial", "-o", "p.csv"]);
    ok(d.path(), &["analyze", "p.csv", "-o", "p.t.csv"]);
    let t = table(d.path(), "p.t.csv");
    let n = t.rows.len();
    assert!(t.rows.iter().enumerate().all(|(i, r)| !r.detected() || i.min(n - i) <= 16));
}

#[test]
fn outputs_are_deterministic() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--catalog", "piecewise_demo", "-o", "p.csv"]);
    let a = ok(d.path(), &["analyze", "p.csv", "--nms", "3"]).stdout;
    let b = ok(d.path(), &["analyze", "p.csv", "--nms", "3"]).stdout;
    assert_eq!(a, b);
    let p1 = ok(d.path(), &["perturb", "p.csv", "--seed", "5"]).stdout;
    let p2 = ok(d.path(), &["perturb", "p.csv", "--seed", "5"]).stdout;
    assert_eq!(p1, p2);
}

#[test]
fn nms_thins_detections() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "step", "-o", "s.csv"]);
    ok(d.path(), &["analyze", "s.csv", "-o", "a.csv"]);
    ok(d.path(), &["analyze", "s.csv", "--nms", "3", "-o", "b.csv"]);
    let all = table(d.path(), "a.csv").rows.iter().filter(|r| r.detected()).count();
    let thin: Vec<usize> = table(d.path(), "b.csv")
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.detected())
        .map(|(i, _)| i)
        .collect();
    assert!(thin.len() < all);
    assert!(thin.contains(&512));
}

#[test]
fn operate_rotates_and_translates() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "step", "-o", "s.csv"]);
    ok(d.path(), &["operate", "s.csv", "--hilbert", "1", "-o", "h.csv"]);
    ok(d.path(), &["analyze", "h.csv", "-o", "h.t.csv"]);
    let t = table(d.path(), "h.t.csv");
    assert!((t.rows[512].arg_sig.abs() - PI).abs() < 0.05);

    ok(d.path(), &["operate", "s.csv", "--laplacian", "0.5", "-o", "l.csv"]);
    ok(d.path(), &["analyze", "l.csv", "-o", "l.t.csv"]);
    ok(d.path(), &["analyze", "s.csv", "-o", "s.t.csv"]);
    let (l, s) = (table(d.path(), "l.t.csv"), table(d.path(), "s.t.csv"));
    for (a, b) in l.rows.iter().zip(&s.rows) {
        assert_eq!(a.detected(), b.detected());
        if a.detected() {
            assert!((a.arg_sig - b.arg_sig).abs() < 0.05);
        }
    }

    ok(d.path(), &["operate", "s.csv", "--translate", "0.1", "-o", "t.csv"]);
    ok(d.path(), &["analyze", "t.csv", "-o", "t.t.csv"]);
    let t = table(d.path(), "t.t.csv");
    let near = |b: f64| t.rows.iter().any(|r| r.detected() && (r.b - b).abs() < 2.0 / 1024.0);
    assert!(near(0.6) && near(0.1));
    let f = SignalFile::parse(&std::fs::read_to_string(d.path().join("t.csv")).unwrap()).unwrap();
    assert_eq!(f.meta.history, vec!["translate(shift=0.1)".to_string()]);
}

#[test]
fn perturb_and_verify_moduli() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "step", "-o", "s.csv"]);
    let out = ok(d.path(), &["perturb", "s.csv", "--seed", "1", "--verify-moduli", "-o", "p.csv"]);
    let log = String::from_utf8(out.stderr).unwrap();
    assert_eq!(log.lines().count(), 10);
    assert!(log.lines().all(|l| l.ends_with("match")));
    ok(d.path(), &["analyze", "p.csv", "-o", "p.t.csv"]);
    assert!(!table(d.path(), "p.t.csv").rows[512].detected());
}

#[test]
fn perturb_rejects_non_power_of_two() {
    let d = tempfile::tempdir().unwrap();
    ok(d.path(), &["generate", "--kind", "step", "--n", "1000", "-o", "s.csv"]);
    assert_eq!(wavesign(d.path(), &["perturb", "s.csv"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(wavesign(d.path(), &["generate", "--kind", "nope"]).status.code(), Some(2));
    assert_eq!(wavesign(d.path(), &["generate", "--kind", "cusp", "--gamma", "-1"]).status.code(), Some(2));
    assert_eq!(wavesign(d.path(), &["analyze", "missing.csv"]).status.code(), Some(2));
    std::fs::write(d.path().join("bad.csv"), "x,f\n0,zzz\n").unwrap();
    assert_eq!(wavesign(d.path(), &["analyze", "bad.csv"]).status.code(), Some(2));
    ok(d.path(), &["generate", "--kind", "step", "-o", "s.csv"]);
    assert_eq!(wavesign(d.path(), &["analyze", "s.csv", "--a0", "100"]).status.code(), Some(3));
    assert_eq!(wavesign(d.path(), &["analyze", "s.csv", "--tau", "1.5"]).status.code(), Some(2));
    assert_eq!(wavesign(d.path(), &["report"]).status.code(), Some(2));
    assert_eq!(wavesign(d.path(), &["operate", "s.csv"]).status.code(), Some(2));
}

#[test]
fn report_checks_catalog_expectations() {
    let d = tempfile::tempdir().unwrap();
    let names = ["step-up", "step-down", "cusp-down", "cusp-up", "polynomial", "cosine", "gaussian", "step_plus_cusp", "piecewise_demo"];
    let mut tables = Vec::new();
    let mut strict = Vec::new();
    for n in names {
        let s = format!("{n}.csv");
        ok(d.path(), &["generate", "--catalog", n, "-o", &s]);
        let t = format!("{n}.t.csv");
        ok(d.path(), &["analyze", &s, "-o", &t]);
        let t95 = format!("{n}.t95.json");
        ok(d.path(), &["analyze", &s, "--tau", "0.95", "-o", &t95]);
        tables.push(t);
        strict.push(t95);
    }
    let mut args = vec!["report"];
    args.extend(tables.iter().map(String::as_str));
    let out = wavesign(d.path(), &args);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("all expectations met"));

    let mut args = vec!["report"];
    args.extend(strict.iter().map(String::as_str));
    let out = wavesign(d.path(), &args);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(1));
    let gaussian = text.split("gaussian.t95.json").nth(1).unwrap();
    assert!(gaussian.lines().nth(1).unwrap().contains("FAIL"), "{text}");
}

#[test]
fn output_directory_override() {
    let d = tempfile::tempdir().unwrap();
    let out = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_wavesign"))
        .args(["generate", "--kind", "step", "-o", "sub/s.csv"])
        .current_dir(d.path())
        .env(wavesign::cli::OUT_DIR_ENV, out.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.path().join("sub/s.csv").exists());
    assert!(!d.path().join("sub/s.csv").exists());
}

#[test]
fn catalog_lists_entries() {
    let d = tempfile::tempdir().unwrap();
    let out = String::from_utf8(ok(d.path(), &["catalog"]).stdout).unwrap();
    assert_eq!(out.lines().count(), 9);
    assert!(out.lines().next().unwrap().starts_with("step-up"));
}
