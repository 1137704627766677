use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bsq_core::plot::{plot_rows, write_csv};
use bsq_core::quantize::{bs_quantization, default_window, stabilization_threshold};
use bsq_core::report::{BothReport, CompareReport, Count, ModuleReport, SurfaceSummary, ValidationReport};
use bsq_core::{
    compare, formal_gq, stabilized_dimension, BManifold, CompareOptions, Dimension, Error, Manifest,
    ManifoldVariant, OracleConfig, Tolerance,
};
use clap::{Parser, Subcommand, ValueEnum};

const PLOT_SAMPLES: usize = 400;

#[derive(Parser)]
#[command(name = "bsq", version, about = "Bohr-Sommerfeld and formal quantization of toric and b-toric manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Delzant conditions and the surface data of a manifest.
    Validate { file: PathBuf },
    /// Print the quantization as a list of weights with multiplicities.
    Quantize {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Bs)]
        method: Method,
        /// Modular levels -N..=N to include.
        #[arg(long)]
        window: Option<u32>,
        /// Weight each leaf by the sign of its component.
        #[arg(long)]
        signed: bool,
    },
    /// Run both quantizations and report any weight where they differ.
    Compare {
        file: PathBuf,
        #[arg(long)]
        window: Option<u32>,
        /// Also check against the brute-force references.
        #[arg(long)]
        use_oracle: bool,
    },
    /// Write profile samples and leaves of a surface as CSV.
    PlotData {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Bs,
    Fgq,
    Both,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Json(_) | Error::ParseRational(_) | Error::Manifest(_) => 1,
            Error::NotStabilized { .. } => 3,
            _ => 2,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn tolerance() -> Result<Tolerance, Failure> {
    match std::env::var("BSQ_TOLERANCE") {
        Err(_) => Ok(Tolerance::default()),
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(Tolerance::new(t)),
            _ => Err(Failure::new(1, format!("BSQ_TOLERANCE must be a positive number, got {text:?}"))),
        },
    }
}

fn read_manifest(path: &Path) -> Result<Manifest, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    Manifest::from_json(&text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn emit<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(2, e.to_string()))?;
    let mut out = io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Failure::new(2, e.to_string()))
}

fn window_for(m: &BManifold, manifest: &Manifest, flag: Option<u32>) -> u32 {
    flag.or(manifest.options.window).unwrap_or_else(|| default_window(m))
}

fn validate(path: &Path) -> Outcome {
    let manifest = read_manifest(path)?;
    let m = manifest.build()?;
    let mut warnings = Vec::new();
    let mut valid = true;
    if let Some(p) = m.polytope_factor() {
        match m.delzant() {
            Some(report) => {
                valid &= report.smooth;
                if !report.redundant.is_empty() {
                    warnings.push(format!("redundant half-spaces {:?}", report.redundant));
                }
            }
            None => {
                valid = false;
                warnings.push(format!("{}-dimensional polytope factor is empty", p.dim()));
            }
        }
    }
    let report = ValidationReport {
        valid,
        rank: m.rank(),
        delzant: m.delzant().cloned(),
        surface: m.surface().map(SurfaceSummary::new),
        warnings,
    };
    emit(&report)?;
    Ok(if valid { 0 } else { 2 })
}

fn quantize(path: &Path, method: Method, window: Option<u32>, signed: bool) -> Outcome {
    let tol = tolerance()?;
    let manifest = read_manifest(path)?;
    let m = manifest.build()?;
    let window = window_for(&m, &manifest, window);
    let b = m.is_b_manifold();
    let stabilized = if b && (signed || method != Method::Bs) {
        Some(stabilized_dimension(&m, tol)?)
    } else {
        None
    };
    let bs = || -> Result<ModuleReport, Failure> {
        let module = bs_quantization(&m, window, signed, tol)?;
        Ok(ModuleReport::new("bs", signed || !b, &module, stabilized.filter(|_| signed)))
    };
    let fgq = || -> Result<ModuleReport, Failure> {
        let module = formal_gq(&m, window, tol)?;
        Ok(ModuleReport::new("fgq", true, &module, stabilized))
    };
    match method {
        Method::Bs => emit(&bs()?)?,
        Method::Fgq => emit(&fgq()?)?,
        Method::Both => {
            let (bs, fgq) = (bs()?, fgq()?);
            let dimension = match stabilized {
                Some(d) if signed => Count::Finite(d),
                Some(_) => Dimension::Diverged.into(),
                None => Count::Finite(fgq.dimension),
            };
            let equal = bs.weights == fgq.weights;
            emit(&BothReport {
                bs,
                fgq,
                equal,
                dimension,
            })?;
        }
    }
    Ok(0)
}

fn run_compare(path: &Path, window: Option<u32>, use_oracle: bool) -> Outcome {
    let tol = tolerance()?;
    let manifest = read_manifest(path)?;
    let m = manifest.build()?;
    let window = window_for(&m, &manifest, window);
    let options = CompareOptions {
        tolerance: tol,
        oracle: use_oracle.then(|| manifest.options.oracle.clone().unwrap_or_else(OracleConfig::default)),
        ..Default::default()
    };
    let report = compare(&m, window, &options)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    if m.is_b_manifold() && window < stabilization_threshold(&m) {
        eprintln!("note: pass --window to widen the comparison");
    }
    for diff in &report.per_weight_diffs {
        eprintln!(
            "mismatch at {:?}: bs {} fgq {}{}",
            diff.weight,
            diff.bs,
            diff.fgq,
            diff.oracle.map(|o| format!(" oracle {o}")).unwrap_or_default()
        );
    }
    emit(&CompareReport::from(&report))?;
    Ok(if report.equal { 0 } else { 4 })
}

fn plot_data(path: &Path, out: &Path) -> Outcome {
    let tol = tolerance()?;
    let manifest = read_manifest(path)?;
    let m = manifest.build()?;
    let ManifoldVariant::Surface(surface) = m.variant() else {
        return Err(Error::NotASurface.into());
    };
    let window = window_for(&m, &manifest, None);
    let rows = plot_rows(surface, window, m.modular_shift(), PLOT_SAMPLES, tol)?;
    let file = fs::File::create(out)
        .map_err(|e| Failure::new(2, format!("cannot create {}: {e}", out.display())))?;
    let mut writer = BufWriter::new(file);
    write_csv(&rows, &mut writer)
        .and_then(|_| writer.flush())
        .map_err(|e| Failure::new(2, format!("cannot write {}: {e}", out.display())))?;
    eprintln!("wrote {} rows to {}", rows.len(), out.display());
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Quantize {
            file,
            method,
            window,
            signed,
        } => quantize(&file, method, window, signed),
        Command::Compare {
            file,
            window,
            use_oracle,
        } => run_compare(&file, window, use_oracle),
        Command::PlotData { file, out } => plot_data(&file, &out),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
