//! The `wavesign` command-line interface.
//!
//! Exit codes: 0 success, 1 a catalog expectation failed, 2 usage or parse
//! error, 3 a numeric precondition (band coverage, admissibility) failed.

pub mod io;
pub mod report;

use std::ffi::OsString;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::corpus::{self, GeneratorSpec, Orientation, PerturbationSpec, SignalKind};
use crate::error::Error;
use crate::operators::{self, OperatorSpec};
use crate::signature::{classify, mean_resultant, non_max_suppression, DEFAULT_MAGNITUDE_FLOOR};
use crate::transform::{cwt, make_scale_grid, Signal};
use crate::wavelet::{TransitionProfile, WaveletSpec};

use io::{AnalysisMeta, AnalysisTable, Format, SignalFile, SignalMeta};

/// Environment variable naming a directory that relative output paths are
/// resolved against.
pub const OUT_DIR_ENV: &str = "WAVESIGN_OUT_DIR";

/// Default base scale `a_0 = 1/(16π)`.
pub const DEFAULT_BASE_SCALE: f64 = 1.0 / (16.0 * PI);

/// Full parameter record of a run, embedded in every analysis table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub n: usize,
    pub scales: usize,
    pub voices_per_octave: u32,
    pub base_scale: f64,
    pub threshold: f64,
    pub dilation: f64,
    pub smoothness_order: u32,
    pub magnitude_floor: f64,
    #[serde(default)]
    pub seed: Option<u64>,
    pub nms_window: usize,
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 1024,
            scales: 16,
            voices_per_octave: 3,
            base_scale: DEFAULT_BASE_SCALE,
            threshold: FRAC_1_SQRT_2,
            dilation: 1.0,
            smoothness_order: 1,
            magnitude_floor: DEFAULT_MAGNITUDE_FLOOR,
            seed: None,
            nms_window: 0,
            input: None,
            output: None,
            format: Format::Csv,
        }
    }
}

impl RunConfig {
    pub fn wavelet(&self) -> crate::Result<WaveletSpec> {
        WaveletSpec::new(TransitionProfile::from_smoothness_order(self.smoothness_order)?, self.dilation)
    }
}

#[derive(Debug, Parser)]
#[command(name = "wavesign", version, about = "Complex wavelet-sign signatures of 1D signals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic signal
    Generate(GenerateArgs),
    /// Compute the signature table of a signal
    Analyze(AnalyzeArgs),
    /// Apply a fractional operator, translation or dilation
    Operate(OperateArgs),
    /// Randomise the signs of the signal's Daubechies wavelet coefficients
    Perturb(PerturbArgs),
    /// Summarise analysis tables and check catalog expectations
    Report(ReportArgs),
    /// List the catalog of reference signals
    Catalog,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (stdout when omitted)
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Output format; defaults to the output file's extension, else csv
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Step,
    Cusp,
    Polynomial,
    Gaussian,
    Cosine,
    Weierstrass,
    PiecewiseDemo,
    StepPlusCusp,
    LinearRamp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrientationArg {
    Up,
    Down,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Signal family
    #[arg(long, value_enum, required_unless_present = "catalog", conflicts_with = "catalog")]
    pub kind: Option<KindArg>,
    /// Generate a named catalog entry instead (see `wavesign catalog`)
    #[arg(long)]
    pub catalog: Option<String>,
    /// Feature position b0 in [0, 1)
    #[arg(long, default_value_t = 0.5)]
    pub pos: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Sign of the step or cusp term
    #[arg(long, value_enum, default_value = "up")]
    pub orientation: OrientationArg,
    /// Cusp exponent
    #[arg(long, default_value_t = 0.5)]
    pub gamma: f64,
    /// Cusp amplitude for step-plus-cusp
    #[arg(long, default_value_t = 0.25)]
    pub amplitude: f64,
    /// Polynomial coefficients c0,c1,... in the centred coordinate
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.2,1,-2,3")]
    pub coeffs: Vec<f64>,
    /// Gaussian standard deviation
    #[arg(long, default_value_t = 0.05)]
    pub std: f64,
    /// Cosine frequency in cycles per domain
    #[arg(long, default_value_t = 5)]
    pub freq: u32,
    /// Weierstrass amplitude ratio
    #[arg(long, default_value_t = 0.35)]
    pub r: f64,
    /// Weierstrass frequency ratio (integer)
    #[arg(long, default_value_t = 9.0)]
    pub t: f64,
    /// Weierstrass term count (default: all below Nyquist)
    #[arg(long)]
    pub terms: Option<u32>,
    /// Ramp slope
    #[arg(long, default_value_t = 1.0)]
    pub slope: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AnalysisArgs {
    /// Number of scales J
    #[arg(long = "scales", default_value_t = 16)]
    pub scales: usize,
    /// Voices per octave Q
    #[arg(long = "voices", default_value_t = 3)]
    pub voices: u32,
    /// Base scale a0
    #[arg(long, default_value_t = DEFAULT_BASE_SCALE)]
    pub a0: f64,
    /// Detection threshold tau in (0, 1)
    #[arg(long, default_value_t = FRAC_1_SQRT_2)]
    pub tau: f64,
    /// Wavelet frequency stretch s
    #[arg(long, default_value_t = 1.0)]
    pub dilation: f64,
    /// Transition smoothness order (1 or 3)
    #[arg(long, default_value_t = 1)]
    pub smoothness: u32,
    /// Relative magnitude floor for sign extraction
    #[arg(long, default_value_t = DEFAULT_MAGNITUDE_FLOOR)]
    pub floor: f64,
    /// Non-maximum suppression half-window in samples (0 = off)
    #[arg(long, default_value_t = 0)]
    pub nms: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Signal file (CSV or JSON)
    pub input: PathBuf,
    #[command(flatten)]
    pub analysis: AnalysisArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
#[group(id = "operator", required = true, multiple = false)]
pub struct OperatorArgs {
    /// Fractional Laplacian of order r
    #[arg(long, allow_hyphen_values = true)]
    pub laplacian: Option<f64>,
    /// Fractional Hilbert transform of order alpha
    #[arg(long, allow_hyphen_values = true)]
    pub hilbert: Option<f64>,
    /// Periodic translation by a fraction of the domain
    #[arg(long, allow_hyphen_values = true)]
    pub translate: Option<f64>,
    /// Dilation factor (features move from b to factor*b)
    #[arg(long)]
    pub dilate: Option<f64>,
}

impl OperatorArgs {
    fn spec(&self) -> OperatorSpec {
        if let Some(order) = self.laplacian {
            OperatorSpec::FractionalLaplacian { order }
        } else if let Some(order) = self.hilbert {
            OperatorSpec::FractionalHilbert { order }
        } else if let Some(shift) = self.translate {
            OperatorSpec::Translate { shift }
        } else {
            OperatorSpec::Dilate { factor: self.dilate.unwrap_or(1.0) }
        }
    }
}

#[derive(Debug, Args)]
pub struct OperateArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub operator: OperatorArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of wavelet levels to randomise (default: all)
    #[arg(long)]
    pub levels: Option<usize>,
    /// Daubechies order (vanishing moments, 1..=10)
    #[arg(long, default_value_t = corpus::DEFAULT_FILTER_ORDER)]
    pub filter_order: usize,
    /// Print per-level coefficient modulus checksums before and after to stderr
    #[arg(long)]
    pub verify_moduli: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Analysis tables produced by `analyze`
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
}

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BandCoverage(_) | Error::NotAdmissible(_) => 3,
            Error::InvalidSignal(_) | Error::InvalidParameter(_) | Error::Parse(_) => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn output_format(out: &OutputArgs) -> Format {
    out.format
        .unwrap_or_else(|| out.output.as_deref().map_or(Format::Csv, Format::from_path))
}

fn write_output(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.output {
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::usage(format!("writing to stdout: {e}")))
        }
        Some(p) => {
            let path = resolve_output(p);
            if let Some(parent) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .map_err(|e| CliError::usage(format!("creating {}: {e}", parent.display())))?;
            }
            std::fs::write(&path, text).map_err(|e| CliError::usage(format!("writing {}: {e}", path.display())))
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))
}

fn read_signal(path: &Path) -> CliResult<SignalFile> {
    let text = read_text(path)?;
    SignalFile::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn generator_spec(a: &GenerateArgs) -> CliResult<(GeneratorSpec, Option<String>)> {
    if let Some(name) = &a.catalog {
        let entry = corpus::catalog_entry(name, a.n)
            .ok_or_else(|| CliError::usage(format!("unknown catalog entry `{name}` (see `wavesign catalog`)")))?;
        let mut spec = entry.spec;
        spec.position = a.pos;
        return Ok((spec, Some(name.clone())));
    }
    let orientation = match a.orientation {
        OrientationArg::Up => Orientation::Positive,
        OrientationArg::Down => Orientation::Negative,
    };
    let kind = match a.kind.expect("clap requires --kind without --catalog") {
        KindArg::Step => SignalKind::Step { orientation },
        KindArg::Cusp => SignalKind::Cusp { exponent: a.gamma, orientation },
        KindArg::Polynomial => SignalKind::Polynomial { coefficients: a.coeffs.clone() },
        KindArg::Gaussian => SignalKind::Gaussian { std_dev: a.std },
        KindArg::Cosine => SignalKind::Cosine { frequency: a.freq },
        KindArg::Weierstrass => SignalKind::Weierstrass { r: a.r, t: a.t, terms: a.terms },
        KindArg::PiecewiseDemo => SignalKind::PiecewiseDemo,
        KindArg::StepPlusCusp => SignalKind::StepPlusCusp { exponent: a.gamma, amplitude: a.amplitude },
        KindArg::LinearRamp => SignalKind::LinearRamp { slope: a.slope },
    };
    Ok((GeneratorSpec::new(a.n, a.pos, kind), None))
}

fn cmd_generate(a: &GenerateArgs) -> CliResult<()> {
    let (spec, catalog) = generator_spec(a)?;
    let signal = corpus::generate(&spec)?;
    let signal = match &catalog {
        Some(name) => signal.with_label(name.clone()),
        None => signal,
    };
    let meta = SignalMeta { catalog, generator: Some(spec), history: Vec::new() };
    let text = SignalFile::new(&signal, meta).render(output_format(&a.out))?;
    write_output(&a.out, &text)
}

/// Runs the signature pipeline for a configuration.
pub fn analyze_signal(signal: &Signal, config: &RunConfig) -> crate::Result<(crate::SignatureField, Option<Vec<usize>>)> {
    let wavelet = config.wavelet()?;
    let grid = make_scale_grid(config.base_scale, config.voices_per_octave, config.scales)?;
    let field = cwt(signal, &wavelet, &grid)?;
    if config.magnitude_floor.is_nan() || config.magnitude_floor < 0.0 {
        return Err(Error::InvalidParameter("magnitude floor must be nonnegative".into()));
    }
    let w = mean_resultant(&field, field.magnitude_floor(config.magnitude_floor));
    let sig = classify(&w, config.threshold)?;
    let kept = (config.nms_window > 0).then(|| non_max_suppression(&sig, config.nms_window));
    Ok((sig, kept))
}

fn cmd_analyze(a: &AnalyzeArgs) -> CliResult<()> {
    let file = read_signal(&a.input)?;
    let signal = file.signal()?;
    let p = &a.analysis;
    let config = RunConfig {
        n: signal.len(),
        scales: p.scales,
        voices_per_octave: p.voices,
        base_scale: p.a0,
        threshold: p.tau,
        dilation: p.dilation,
        smoothness_order: p.smoothness,
        magnitude_floor: p.floor,
        seed: None,
        nms_window: p.nms,
        input: Some(a.input.clone()),
        output: a.out.output.clone(),
        format: output_format(&a.out),
    };
    let (field, kept) = analyze_signal(&signal, &config)?;
    let meta = AnalysisMeta { signal: file.name.clone(), source: file.meta.clone(), config: config.clone() };
    let table = AnalysisTable::from_field(&field, kept.as_deref(), meta);
    write_output(&a.out, &table.render(config.format)?)
}

fn cmd_operate(a: &OperateArgs) -> CliResult<()> {
    let file = read_signal(&a.input)?;
    let signal = file.signal()?;
    let op = a.operator.spec();
    let out = operators::apply(&signal, &op)?;
    let mut meta = file.meta.clone();
    meta.history.push(op.describe());
    // operated signals no longer satisfy the catalog prediction
    meta.catalog = None;
    let text = SignalFile::new(&out, meta).render(output_format(&a.out))?;
    write_output(&a.out, &text)
}

fn cmd_perturb(a: &PerturbArgs) -> CliResult<()> {
    let file = read_signal(&a.input)?;
    let signal = file.signal()?;
    let mut spec = PerturbationSpec::full_depth(a.seed, signal.len());
    spec.filter_order = a.filter_order;
    if let Some(l) = a.levels {
        spec.dwt_levels = l;
    }
    let p = corpus::perturb_wavelet_signs(&signal, &spec)?;
    if a.verify_moduli {
        let before = corpus::moduli_checksum(&p.moduli_before);
        let after = corpus::moduli_checksum(&p.moduli_after);
        for (level, (x, y)) in before.iter().zip(&after).enumerate() {
            eprintln!("level {:2}: before {x} after {y} {}", level + 1, if x == y { "match" } else { "MISMATCH" });
        }
        if !p.moduli_preserved() {
            return Err(CliError { code: 3, message: "coefficient moduli changed under perturbation".into() });
        }
    }
    let mut meta = file.meta.clone();
    meta.history.push(format!("perturb(seed={}, levels={}, order={})", spec.seed, spec.dwt_levels, spec.filter_order));
    meta.catalog = None;
    let text = SignalFile::new(&p.signal, meta).render(output_format(&a.out))?;
    write_output(&a.out, &text)
}

fn cmd_report(a: &ReportArgs) -> CliResult<bool> {
    let mut all = true;
    let mut out = String::new();
    let mut checked = 0;
    for path in &a.inputs {
        let text = read_text(path)?;
        let table = AnalysisTable::parse(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let r = report::report_table(&path.display().to_string(), &table);
        all &= r.passed;
        checked += 1;
        out.push_str(&r.text);
    }
    out.push_str(&format!("{} table(s): {}\n", checked, if all { "all expectations met" } else { "expectation failures" }));
    print!("{out}");
    Ok(all)
}

fn cmd_catalog() {
    for e in corpus::catalog(1024) {
        let at = match e.at_feature {
            corpus::Expected::Zero => "0".to_string(),
            corpus::Expected::Sign(z) => format!("{:+.0}{:+.0}i", z.re, z.im),
        };
        println!("{:<16} {:<16} expected at b0={}: {}", e.name, e.spec.kind.name(), e.spec.position, at);
    }
}

pub fn run(cli: Cli) -> CliResult<bool> {
    match &cli.command {
        Command::Generate(a) => cmd_generate(a).map(|_| true),
        Command::Analyze(a) => cmd_analyze(a).map(|_| true),
        Command::Operate(a) => cmd_operate(a).map(|_| true),
        Command::Perturb(a) => cmd_perturb(a).map(|_| true),
        Command::Report(a) => cmd_report(a),
        Command::Catalog => {
            cmd_catalog();
            Ok(true)
        }
    }
}

/// Parses arguments, runs, and maps the outcome onto the exit-code contract.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("wavesign: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
