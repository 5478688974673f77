//! `compop` — finite-section numerics for composition operators on weighted
//! Hardy spaces, on the command line.
//!
//! Subcommands: `matrix` (dump a section), `norm` (operator-norm report with
//! a size-convergence table), `spectrum` (spectrum model plus optional
//! section eigenvalues and iterate radii), `classify` (Möbius conjugacy
//! class), `fredholm` (closed-range verdict), `verify` (checkable identity
//! suites), `witness` (exact parabolic sums / closed-range witness family),
//! `fit` (norm-growth exponent fit), and `sweep` (parallel grids).
//!
//! Exit codes: `0` success, `2` a verification-style check ran and failed,
//! `1` usage or computation error. Every command writes exactly one JSON or
//! CSV artifact to stdout (or `--output`); identical invocations produce
//! byte-identical artifacts. `--config <path>` splices whitespace-separated
//! flag tokens from a file into the argument list (`#` starts a comment
//! line). `COMPOP_THREADS` caps the worker count used by `sweep`.

mod grammar;
mod output;

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use compop::analysis::{
    cr_witness_family, exponent_fit, fredholm_verdict, parabolic_witness, spectral_radius_sequence,
    spectrum_model, FitKind, FitReport, FredholmVerdict, SpectrumModel, WitnessFamilyReport,
};
use compop::exact::{crat_i, crat_int, rat_to_f64};
use compop::moebius::{
    psi1_exact, psi2_exact, tau_n_exact, Moebius, CLASSIFY_TOL, CONJUGATOR_TOL,
};
use compop::operators::{
    composition_section, dn_block_eigs, dtm_section, eigenvalues, gram_section,
    mobius_composition_section, multiplication_section, op_norm, run_default_suite, smallest_sv,
    verify_f2, OperatorMatrix,
};
use compop::series::TruncatedSeries;
use compop::weights::WeightSequence;
use compop::C64;

use grammar::{
    complex_text, parse_complex_flag, parse_float_list, parse_symbol, parse_weights, Symbol,
};
use output::{csv, f17, to_json, Envelope, SCHEMA_VERSION};

// ---------------------------------------------------------------------------
// Argument surface
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "compop",
    version,
    about = "Finite-section numerics for composition operators on weighted Hardy spaces",
    long_about = "Build finite sections of composition operators on weighted Hardy spaces, \
                  measure norms and spectra, and run verification suites.\n\n\
                  Exit codes: 0 success; 2 a verification check ran and failed; 1 usage or \
                  computation error.\n\n\
                  Symbols: psi1 | psi2 | psi1^n:<int> | mobius:theta=<f>,z0=<re>+<im>i | \
                  hyperbolic:r=<f> | blaschke:zeros=<z>,...,theta=<f> | poly:coeffs=<c>,...\n\
                  Weights: hardy | dirichlet:lambda=<f> | dn1:n=<int> | dn2:n=<int> | \
                  custom:file=<path>, optionally prefixed by inverse: and/or tilde:.\n\n\
                  COMPOP_THREADS caps the worker count used by sweep."
)]
struct Cli {
    /// Splice whitespace-separated flag tokens from a file into the argument
    /// list ('#' starts a comment line). At most one occurrence.
    #[arg(long, value_name = "PATH", global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump a finite section (or the symbol's coefficients) as rows.
    Matrix(MatrixArgs),
    /// Operator-norm report with a size-convergence table.
    Norm(NormArgs),
    /// Spectrum model for a Möbius symbol, with optional section eigenvalues
    /// and iterate radii.
    Spectrum(SpectrumArgs),
    /// Conjugacy class of a Möbius symbol: kind, fixed points, multiplier.
    Classify(ClassifyArgs),
    /// Closed-range / semi-Fredholm / Fredholm verdict for a symbol.
    Fredholm(FredholmArgs),
    /// Run a verification suite; exits 2 if any check fails.
    Verify(VerifyArgs),
    /// Exact parabolic witness sums or the closed-range witness family.
    Witness(WitnessArgs),
    /// Fit a norm-growth exponent against its predicted cap; exits 2 when
    /// the fitted slope exceeds the cap.
    Fit(FitArgs),
    /// Evaluate one task over a (weights × parameter) grid in parallel.
    Sweep(SweepArgs),
}

/// Artifact destination and format, shared by every subcommand.
#[derive(Args)]
struct OutputOpts {
    /// Write the artifact to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Artifact format; each subcommand has a natural default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl OutputOpts {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    fn write(&self, artifact: &str) -> anyhow::Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, artifact)
                .with_context(|| format!("cannot write artifact to '{}'", path.display())),
            None => {
                print!("{artifact}");
                Ok(())
            }
        }
    }
}

#[derive(Args)]
struct MatrixArgs {
    /// Symbol to build the section for.
    #[arg(long)]
    symbol: String,
    /// Weight preset the section is built in.
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Section size: monomial indices 0..size-1.
    #[arg(long, default_value_t = 16)]
    size: usize,
    /// Which operator to section.
    #[arg(long, value_enum, default_value_t = MatrixKind::Composition)]
    kind: MatrixKind,
    /// Dump the symbol's truncated Taylor coefficients instead of a section.
    #[arg(long)]
    dump_series: bool,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixKind {
    /// Composition operator: column j holds the coefficients of symbol^j.
    Composition,
    /// Multiplication by the symbol (lower triangular).
    Multiplication,
    /// Gram matrix of the symbol's power family.
    Gram,
}

#[derive(Args)]
struct NormArgs {
    #[arg(long)]
    symbol: String,
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Largest (final) section size of the convergence table.
    #[arg(long, default_value_t = 256)]
    size: usize,
    /// Smallest section size of the convergence table; sizes double from
    /// here up to --size.
    #[arg(long, default_value_t = 32)]
    start: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct SpectrumArgs {
    /// Möbius symbol (psi1, psi2, psi1^n:, mobius:, hyperbolic:).
    #[arg(long)]
    symbol: String,
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// When positive, also report the eigenvalues of the size-N section.
    #[arg(long, default_value_t = 0)]
    size: usize,
    /// When positive, also report iterate radii r_j for j = 1..=J (needs
    /// --size > 0 for the section size).
    #[arg(long, default_value_t = 0, value_name = "J")]
    iterates: u32,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Möbius symbol to classify.
    #[arg(long)]
    symbol: String,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct FredholmArgs {
    #[arg(long)]
    symbol: String,
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Boundary-modulus tolerance (widened internally by the truncation
    /// tail bound).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Realization degree for the symbol's coefficients.
    #[arg(long, default_value_t = 256)]
    size: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    suite: VerifySuite,
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Pair-transfer identity: scaled Gram of the pair family against the
    /// block-diagonal transfer section.
    F2(F2Args),
    /// Closed-form 2×2 transfer-block eigenvalues against LAPACK on the
    /// assembled blocks, plus the exact spot value at (w, z0) = (1, 0.5).
    DnEigs(SuiteOutArgs),
    /// Exact iterate closed forms and the inverse pair, in Gaussian-rational
    /// arithmetic with zero tolerance.
    IterateClosedForms(SuiteOutArgs),
    /// Exact conjugation identities and float canonical-form conjugators.
    Conjugators(SuiteOutArgs),
    /// Norm-inequality suite over the default grid of interior points and
    /// weights.
    Bounds(BoundsArgs),
    /// Every suite above with its default configuration.
    All(AllArgs),
}

#[derive(Args)]
struct SuiteOutArgs {
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct F2Args {
    /// Interior point of the pair family.
    #[arg(long, default_value = "0.4")]
    z0: String,
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Section size.
    #[arg(long, default_value_t = 512)]
    size: usize,
    /// Number of index pairs compared.
    #[arg(long, default_value_t = 32)]
    block: usize,
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct BoundsArgs {
    /// Section size used by the measured inequalities.
    #[arg(long, default_value_t = 256)]
    size: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct AllArgs {
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(subcommand)]
    which: WitnessCmd,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Exact alternating binomial sums with their positive floors; exits 2
    /// if any floor is violated.
    Parabolic(ParabolicArgs),
    /// Peak-function family: per-power norms, the certified floor, and the
    /// geometry report.
    Family(FamilyArgs),
}

#[derive(Args)]
struct ParabolicArgs {
    /// Evaluate the sums for every order 1..=M.
    #[arg(long, default_value_t = 10, value_name = "M")]
    m: u32,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct FamilyArgs {
    /// Symbol whose closed image must miss the excluded point.
    #[arg(long, default_value = "poly:coeffs=0,0.5")]
    symbol: String,
    /// Excluded boundary point the peak functions concentrate at.
    #[arg(long, default_value = "1")]
    xi: String,
    /// Peak sharpness in (0, 1); smaller is sharper.
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Largest power of the peak function.
    #[arg(long, default_value_t = 20)]
    k_max: u32,
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Section size (must exceed 4·k_max).
    #[arg(long, default_value_t = 512)]
    size: usize,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Args)]
struct FitArgs {
    /// Symbol family whose norm growth gets fitted.
    #[arg(long, value_enum)]
    kind: FitFamily,
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Section size per measured radius.
    #[arg(long, default_value_t = 128)]
    size: usize,
    /// Comma-separated radii in (0, 1), at least four, pairwise distinct.
    #[arg(long, default_value = "0.5,0.6,0.7,0.8")]
    grid: String,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitFamily {
    /// Involutive automorphisms swapping 0 and r.
    Normc,
    /// Two-zero Blaschke products with zeros {0, r}.
    Normb,
    /// Hyperbolic pulls (z + r)/(1 + rz).
    Hyperbolic,
}

#[derive(Args)]
struct SweepArgs {
    /// Measurement taken at each grid point.
    #[arg(long, value_enum)]
    task: SweepTask,
    /// Semicolon-separated weight presets.
    #[arg(long, default_value = "hardy")]
    weights: String,
    /// Comma-separated interior points: sweeps the involution family
    /// swapping 0 and z0 (with --theta rotation).
    #[arg(long)]
    z0: Option<String>,
    /// Comma-separated pull strengths in (0, 1): sweeps the hyperbolic
    /// family (z + r)/(1 + rz).
    #[arg(long)]
    r: Option<String>,
    /// Section size at every grid point.
    #[arg(long, default_value_t = 256)]
    size: usize,
    /// Rotation angle applied with --z0.
    #[arg(long, default_value_t = 0.0)]
    theta: f64,
    /// Column count for the floor task (default size/4).
    #[arg(long)]
    cols: Option<usize>,
    #[command(flatten)]
    out: OutputOpts,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepTask {
    /// Largest singular value of the composition section.
    Norm,
    /// Smallest singular value of the leading-columns block.
    Floor,
}

// ---------------------------------------------------------------------------
// Entry point and plumbing
// ---------------------------------------------------------------------------

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match splice_config(argv) {
        Ok(v) => v,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };

    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; anything else is a
            // usage error and must exit 1, not clap's default 2 (which this
            // tool reserves for failed verification).
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    eprint!("{e}");
                    1
                }
            };
        }
    };

    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return 1;
    }

    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

/// Replace a single `--config <path>` / `--config=<path>` occurrence with
/// the whitespace-separated tokens of the named file.
fn splice_config(argv: Vec<String>) -> Result<Vec<String>, String> {
    let mut out = Vec::with_capacity(argv.len());
    let mut seen = false;
    let mut i = 0;
    while i < argv.len() {
        let arg = &argv[i];
        let path = if arg == "--config" {
            i += 1;
            match argv.get(i) {
                Some(p) => Some(p.clone()),
                None => return Err("--config needs a file path".into()),
            }
        } else {
            arg.strip_prefix("--config=").map(str::to_string)
        };
        match path {
            Some(path) => {
                if seen {
                    return Err("--config may appear at most once".into());
                }
                seen = true;
                let body = std::fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read config file '{path}': {e}"))?;
                for line in body.lines() {
                    let line = line.trim();
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    for tok in line.split_whitespace() {
                        if tok == "--config" || tok.starts_with("--config=") {
                            return Err("config files cannot include --config".into());
                        }
                        out.push(tok.to_string());
                    }
                }
            }
            None => out.push(arg.clone()),
        }
        i += 1;
    }
    Ok(out)
}

/// Apply `COMPOP_THREADS` to the global worker pool used by `sweep`.
fn configure_threads() -> Result<(), String> {
    match std::env::var("COMPOP_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw
                .parse()
                .map_err(|_| format!("COMPOP_THREADS must be a positive integer, got '{raw}'"))?;
            if n == 0 {
                return Err("COMPOP_THREADS must be a positive integer, got '0'".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| format!("cannot configure the worker pool: {e}"))
        }
    }
}

fn dispatch(cmd: Command) -> anyhow::Result<i32> {
    match cmd {
        Command::Matrix(args) => cmd_matrix(args),
        Command::Norm(args) => cmd_norm(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Fredholm(args) => cmd_fredholm(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Witness(args) => cmd_witness(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Möbius map of a symbol, or a usage error naming the commands that need one.
fn require_moebius<'a>(sym: &'a Symbol, what: &str) -> anyhow::Result<&'a Moebius<C64>> {
    sym.as_moebius().ok_or_else(|| {
        anyhow!(
            "{what} requires a Möbius symbol (psi1, psi2, psi1^n:, mobius:, hyperbolic:); \
             got '{}'",
            sym.describe()
        )
    })
}

/// Composition section for any symbol kind (fast path for Möbius maps).
fn section_for(sym: &Symbol, w: &WeightSequence, n: usize) -> anyhow::Result<OperatorMatrix> {
    match sym.as_moebius() {
        Some(m) => Ok(mobius_composition_section(m, w, n)?),
        None => Ok(composition_section(&sym.series(n)?, w, n)?),
    }
}

fn pairs(zs: &[C64]) -> Vec<[f64; 2]> {
    zs.iter().map(|z| [z.re, z.im]).collect()
}

// ---------------------------------------------------------------------------
// matrix
// ---------------------------------------------------------------------------

fn cmd_matrix(args: MatrixArgs) -> anyhow::Result<i32> {
    let sym = parse_symbol(&args.symbol)?;
    let w = parse_weights(&args.weights)?;
    let n = args.size;
    if n < 1 {
        bail!("--size must be at least 1");
    }

    if args.dump_series {
        let series = sym.series(n)?;
        let inputs = json!({
            "symbol": sym.describe(),
            "weights": args.weights,
            "size": n,
            "dump_series": true,
        });
        let artifact = match args.out.format_or(Format::Csv) {
            Format::Csv => {
                let rows: Vec<Vec<String>> = series
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, c)| vec![k.to_string(), f17(c.re), f17(c.im)])
                    .collect();
                csv("k,re,im", &rows)
            }
            Format::Json => {
                #[derive(Serialize)]
                struct SeriesResult {
                    len: usize,
                    coeffs: Vec<[f64; 2]>,
                }
                to_json(&Envelope {
                    schema_version: SCHEMA_VERSION,
                    command: "matrix",
                    inputs,
                    result: SeriesResult {
                        len: series.coeffs().len(),
                        coeffs: pairs(series.coeffs()),
                    },
                })?
            }
        };
        args.out.write(&artifact)?;
        return Ok(0);
    }

    let section = match args.kind {
        MatrixKind::Composition => section_for(&sym, &w, n)?,
        MatrixKind::Multiplication => multiplication_section(&sym.series(n)?, &w, n),
        MatrixKind::Gram => {
            let g = sym.series(n)?;
            let mut fs = Vec::with_capacity(n);
            let mut p = TruncatedSeries::one(n - 1);
            for j in 0..n {
                if j > 0 {
                    p = p.mul_mod(&g, n - 1);
                }
                fs.push(p.clone());
            }
            gram_section(&fs, &w, n)?
        }
    };

    let inputs = json!({
        "symbol": sym.describe(),
        "weights": args.weights,
        "size": n,
        "kind": format!("{:?}", section.meta.kind),
    });
    let artifact = match args.out.format_or(Format::Csv) {
        Format::Csv => {
            let mut rows = Vec::with_capacity(section.entries.len());
            for ((i, j), v) in section.entries.indexed_iter() {
                rows.push(vec![i.to_string(), j.to_string(), f17(v.re), f17(v.im)]);
            }
            csv("i,j,re,im", &rows)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct MatrixResult {
                nrows: usize,
                ncols: usize,
                entries: Vec<Vec<[f64; 2]>>,
            }
            let entries = section
                .entries
                .rows()
                .into_iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect();
            to_json(&Envelope {
                schema_version: SCHEMA_VERSION,
                command: "matrix",
                inputs,
                result: MatrixResult {
                    nrows: section.entries.nrows(),
                    ncols: section.entries.ncols(),
                    entries,
                },
            })?
        }
    };
    args.out.write(&artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// norm
// ---------------------------------------------------------------------------

fn cmd_norm(args: NormArgs) -> anyhow::Result<i32> {
    let sym = parse_symbol(&args.symbol)?;
    let w = parse_weights(&args.weights)?;
    if args.start < 2 {
        bail!("--start must be at least 2");
    }
    if args.size < args.start {
        bail!("--size must be at least --start");
    }

    let mut sizes = Vec::new();
    let mut s = args.start;
    while s < args.size {
        sizes.push(s);
        s *= 2;
    }
    sizes.push(args.size);

    #[derive(Serialize)]
    struct NormRow {
        n: usize,
        sigma_max: f64,
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in &sizes {
        let section = section_for(&sym, &w, n)?;
        rows.push(NormRow { n, sigma_max: op_norm(&section)? });
    }

    let inputs = json!({
        "symbol": sym.describe(),
        "weights": args.weights,
        "size": args.size,
        "start": args.start,
    });
    let artifact = match args.out.format_or(Format::Json) {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), f17(r.sigma_max)])
                .collect();
            csv("n,sigma_max", &body)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct NormResult {
                rows: Vec<NormRow>,
            }
            to_json(&Envelope {
                schema_version: SCHEMA_VERSION,
                command: "norm",
                inputs,
                result: NormResult { rows },
            })?
        }
    };
    args.out.write(&artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

fn cmd_spectrum(args: SpectrumArgs) -> anyhow::Result<i32> {
    let sym = parse_symbol(&args.symbol)?;
    let m = require_moebius(&sym, "spectrum")?;
    let w = parse_weights(&args.weights)?;
    if args.iterates > 0 && args.size == 0 {
        bail!("--iterates needs --size > 0 for the section size");
    }

    let model = spectrum_model(m, &w)?;
    let eigs = if args.size > 0 {
        Some(eigenvalues(&mobius_composition_section(m, &w, args.size)?)?)
    } else {
        None
    };
    #[derive(Serialize)]
    struct RadiusRow {
        j: u32,
        r: f64,
    }
    let radii = if args.iterates > 0 {
        Some(
            spectral_radius_sequence(m, &w, args.iterates, args.size)?
                .into_iter()
                .map(|(j, r)| RadiusRow { j, r })
                .collect::<Vec<_>>(),
        )
    } else {
        None
    };

    let inputs = json!({
        "symbol": sym.describe(),
        "weights": args.weights,
        "size": args.size,
        "iterates": args.iterates,
    });
    let artifact = match args.out.format_or(Format::Json) {
        Format::Csv => {
            if let Some(radii) = &radii {
                let body: Vec<Vec<String>> = radii
                    .iter()
                    .map(|row| vec![row.j.to_string(), f17(row.r)])
                    .collect();
                csv("j,r", &body)
            } else if let Some(eigs) = &eigs {
                let body: Vec<Vec<String>> = eigs
                    .iter()
                    .enumerate()
                    .map(|(i, z)| vec![i.to_string(), f17(z.re), f17(z.im), f17(z.norm())])
                    .collect();
                csv("index,re,im,modulus", &body)
            } else {
                bail!("csv spectrum output needs --size or --iterates; the model alone is json");
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct SpectrumResult {
                model: SpectrumModel,
                eigenvalues: Option<Vec<[f64; 2]>>,
                radii: Option<Vec<RadiusRow>>,
            }
            to_json(&Envelope {
                schema_version: SCHEMA_VERSION,
                command: "spectrum",
                inputs,
                result: SpectrumResult {
                    model,
                    eigenvalues: eigs.as_deref().map(pairs),
                    radii,
                },
            })?
        }
    };
    args.out.write(&artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(args: ClassifyArgs) -> anyhow::Result<i32> {
    let sym = parse_symbol(&args.symbol)?;
    let m = require_moebius(&sym, "classify")?;
    if args.out.format_or(Format::Json) == Format::Csv {
        bail!("classify emits json only");
    }
    let class = m.classify(CLASSIFY_TOL)?;
    let artifact = to_json(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: "classify",
        inputs: json!({ "symbol": sym.describe() }),
        result: class,
    })?;
    args.out.write(&artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// fredholm
// ---------------------------------------------------------------------------

fn cmd_fredholm(args: FredholmArgs) -> anyhow::Result<i32> {
    let sym = parse_symbol(&args.symbol)?;
    let w = parse_weights(&args.weights)?;
    if args.size < 2 {
        bail!("--size must be at least 2");
    }
    if args.out.format_or(Format::Json) == Format::Csv {
        bail!("fredholm emits json only");
    }
    let g = sym.series(args.size)?;
    let verdict = fredholm_verdict(&g, &w, args.tol)?;
    #[derive(Serialize)]
    struct FredholmResult {
        verdict: FredholmVerdict,
    }
    let artifact = to_json(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: "fredholm",
        inputs: json!({
            "symbol": sym.describe(),
            "weights": args.weights,
            "tol": args.tol,
            "size": args.size,
        }),
        result: FredholmResult { verdict },
    })?;
    args.out.write(&artifact)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// One named pass/fail line of a verification suite.
#[derive(Serialize)]
struct Check {
    name: String,
    pass: bool,
    detail: String,
}

fn emit_suite(
    out: &OutputOpts,
    suite: &'static str,
    inputs: serde_json::Value,
    checks: Vec<Check>,
) -> anyhow::Result<i32> {
    if out.format_or(Format::Json) == Format::Csv {
        bail!("verify emits json only");
    }
    let passed = checks.iter().all(|c| c.pass);
    #[derive(Serialize)]
    struct SuiteResult {
        suite: &'static str,
        checks: Vec<Check>,
        total: usize,
        failed: usize,
        passed: bool,
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    let artifact = to_json(&Envelope {
        schema_version: SCHEMA_VERSION,
        command: "verify",
        inputs,
        result: SuiteResult { suite, total: checks.len(), failed, passed, checks },
    })?;
    out.write(&artifact)?;
    Ok(if passed { 0 } else { 2 })
}

fn f2_checks(z0: C64, weights_text: &str, n: usize, block: usize, tol: f64) -> anyhow::Result<Vec<Check>> {
    let w = parse_weights(weights_text)?;
    let report = verify_f2(&w, z0, n, block)?;
    Ok(vec![Check {
        name: format!(
            "pair-transfer residual ({weights_text}, z0 = {}, n = {n}, block = {block})",
            complex_text(z0)
        ),
        pass: report.max_residual < tol,
        detail: format!("max residual {} vs tolerance {}", f17(report.max_residual), f17(tol)),
    }])
}

fn dn_eigs_checks() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();

    // Exact spot value: bit-for-bit equality, no tolerance.
    let (hi, lo) = dn_block_eigs(1.0, C64::new(0.5, 0.0))?;
    checks.push(Check {
        name: "closed-form block eigenvalues at (w, z0) = (1, 0.5)".into(),
        pass: hi == 2.25 && lo == 0.25,
        detail: format!("got ({}, {}), want (2.25, 0.25) exactly", f17(hi), f17(lo)),
    });

    // Grid: closed form against LAPACK eigenvalues of the assembled DᴴD.
    for &x in &[0.2, 0.4, 0.6] {
        for &wv in &[0.5, 1.0, 2.0] {
            let z0 = C64::new(x, 0.0);
            let (hi, lo) = dn_block_eigs(wv, z0)?;
            let w = WeightSequence::custom(vec![wv; 3])?;
            let block = dtm_section(&w, z0, 2)?;
            let d = &block.entries;
            let dh = d.t().mapv(|z| z.conj());
            let gram = OperatorMatrix {
                entries: dh.dot(d),
                basis: block.basis.clone(),
                meta: block.meta.clone(),
            };
            let eigs = eigenvalues(&gram)?;
            let num_hi = eigs[0].re;
            let num_lo = eigs[1].re;
            let ok = (num_hi - hi).abs() <= 1e-12 * hi.max(1.0)
                && (num_lo - lo).abs() <= 1e-12 * hi.max(1.0)
                && eigs.iter().all(|e| e.im.abs() <= 1e-12);
            checks.push(Check {
                name: format!("block eigenvalues vs LAPACK (w = {wv}, z0 = {x})"),
                pass: ok,
                detail: format!(
                    "closed form ({}, {}), numeric ({}, {})",
                    f17(hi),
                    f17(lo),
                    f17(num_hi),
                    f17(num_lo)
                ),
            });
        }
    }
    Ok(checks)
}

fn iterate_closed_form_checks() -> Vec<Check> {
    let psi1 = psi1_exact();
    let psi2 = psi2_exact();

    let mut all_match = true;
    let mut first_bad = None;
    for n in 1..=100i64 {
        let iter = psi1.iterate(n);
        let target = Moebius {
            a: crat_int(n) + crat_i(),
            b: crat_int(-n),
            c: crat_int(n),
            d: crat_i() - crat_int(n),
        };
        if !iter.projective_eq(&target) {
            all_match = false;
            first_bad.get_or_insert(n);
        }
    }
    let inverse_pair = psi1.compose(&psi2).projective_eq(&Moebius::identity())
        && psi2.compose(&psi1).projective_eq(&Moebius::identity());

    vec![
        Check {
            name: "iterates match the closed form for n = 1..100 (exact)".into(),
            pass: all_match,
            detail: match first_bad {
                None => "all 100 iterates agree projectively, zero tolerance".into(),
                Some(n) => format!("first mismatch at n = {n}"),
            },
        },
        Check {
            name: "the parabolic pair composes to the identity (exact)".into(),
            pass: inverse_pair,
            detail: "both composition orders checked projectively".into(),
        },
    ]
}

fn conjugator_checks() -> anyhow::Result<Vec<Check>> {
    let mut checks = Vec::new();

    let psi1 = psi1_exact();
    let mut all_match = true;
    let mut first_bad = None;
    for n in 1..=50i64 {
        let tau = tau_n_exact(n);
        let lhs = tau.compose(&psi1).compose(&tau.inverse());
        if !lhs.projective_eq(&psi1.iterate(n)) {
            all_match = false;
            first_bad.get_or_insert(n);
        }
    }
    checks.push(Check {
        name: "exact conjugation turns the base map into its n-th iterate (n = 1..50)".into(),
        pass: all_match,
        detail: match first_bad {
            None => "all 50 conjugations agree projectively, zero tolerance".into(),
            Some(n) => format!("first mismatch at n = {n}"),
        },
    });

    let samples: Vec<(&str, Moebius<C64>)> = vec![
        ("parabolic base map", compop::moebius::special(compop::moebius::Special::Psi1)),
        ("hyperbolic pull r = 0.5", Moebius {
            a: C64::new(1.0, 0.0),
            b: C64::new(0.5, 0.0),
            c: C64::new(0.5, 0.0),
            d: C64::new(1.0, 0.0),
        }),
        (
            "generic elliptic automorphism",
            compop::moebius::disk_automorphism(0.7, C64::new(0.2, 0.1))?,
        ),
    ];
    for (label, m) in samples {
        let (tau, canonical) = m.canonical_conjugator()?;
        let conjugated = tau.compose(&m).compose(&tau.inverse());
        let residual = conjugated.projective_distance(&canonical)?;
        checks.push(Check {
            name: format!("canonical conjugator residual ({label})"),
            pass: residual <= CONJUGATOR_TOL,
            detail: format!("projective distance {} vs tolerance {}", f17(residual), f17(CONJUGATOR_TOL)),
        });
    }
    Ok(checks)
}

fn bounds_checks(n: usize) -> anyhow::Result<Vec<Check>> {
    let reports = run_default_suite(n)?;
    Ok(reports
        .into_iter()
        .map(|r| {
            let params = r
                .params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            Check {
                name: format!("{} [{params}]", r.formula_id),
                pass: r.pass,
                detail: format!(
                    "lhs {} vs rhs {} (slack {})",
                    f17(r.lhs),
                    f17(r.rhs),
                    f17(r.slack)
                ),
            }
        })
        .collect())
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<i32> {
    match args.suite {
        VerifySuite::F2(a) => {
            let z0 = parse_complex_flag(&a.z0)?;
            let checks = f2_checks(z0, &a.weights, a.size, a.block, a.tol)?;
            emit_suite(
                &a.out,
                "f2",
                json!({
                    "z0": a.z0, "weights": a.weights, "size": a.size,
                    "block": a.block, "tol": a.tol,
                }),
                checks,
            )
        }
        VerifySuite::DnEigs(a) => emit_suite(&a.out, "dn-eigs", json!({}), dn_eigs_checks()?),
        VerifySuite::IterateClosedForms(a) => {
            emit_suite(&a.out, "iterate-closed-forms", json!({}), iterate_closed_form_checks())
        }
        VerifySuite::Conjugators(a) => {
            emit_suite(&a.out, "conjugators", json!({}), conjugator_checks()?)
        }
        VerifySuite::Bounds(a) => {
            let checks = bounds_checks(a.size)?;
            emit_suite(&a.out, "bounds", json!({ "size": a.size }), checks)
        }
        VerifySuite::All(a) => {
            let mut checks = Vec::new();
            checks.extend(f2_checks(C64::new(0.4, 0.0), "hardy", 512, 32, 1e-8)?);
            checks.extend(f2_checks(C64::new(0.4, 0.0), "dirichlet:lambda=1", 512, 32, 1e-6)?);
            checks.extend(dn_eigs_checks()?);
            checks.extend(iterate_closed_form_checks());
            checks.extend(conjugator_checks()?);
            checks.extend(bounds_checks(256)?);
            emit_suite(&a.out, "all", json!({}), checks)
        }
    }
}

// ---------------------------------------------------------------------------
// witness
// ---------------------------------------------------------------------------

fn cmd_witness(args: WitnessArgs) -> anyhow::Result<i32> {
    match args.which {
        WitnessCmd::Parabolic(a) => {
            if a.m < 1 {
                bail!("--m must be at least 1");
            }
            #[derive(Serialize)]
            struct ParabolicRow {
                m: u32,
                s_exact: String,
                floor_exact: String,
                s: f64,
                floor: f64,
                ok: bool,
            }
            let mut rows = Vec::with_capacity(a.m as usize);
            for m in 1..=a.m {
                let (s, floor) = parabolic_witness(m)?;
                rows.push(ParabolicRow {
                    m,
                    s_exact: s.to_string(),
                    floor_exact: floor.to_string(),
                    s: rat_to_f64(&s),
                    floor: rat_to_f64(&floor),
                    ok: s >= floor,
                });
            }
            let all_ok = rows.iter().all(|r| r.ok);
            let inputs = json!({ "m": a.m });
            let artifact = match a.out.format_or(Format::Csv) {
                Format::Csv => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.m.to_string(),
                                r.s_exact.clone(),
                                r.floor_exact.clone(),
                                f17(r.s),
                                f17(r.floor),
                                r.ok.to_string(),
                            ]
                        })
                        .collect();
                    csv("m,s_exact,floor_exact,s,floor,ok", &body)
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct ParabolicResult {
                        rows: Vec<ParabolicRow>,
                        all_ok: bool,
                    }
                    to_json(&Envelope {
                        schema_version: SCHEMA_VERSION,
                        command: "witness",
                        inputs,
                        result: ParabolicResult { rows, all_ok },
                    })?
                }
            };
            a.out.write(&artifact)?;
            Ok(if all_ok { 0 } else { 2 })
        }
        WitnessCmd::Family(a) => {
            let sym = parse_symbol(&a.symbol)?;
            let xi = parse_complex_flag(&a.xi)?;
            let w = parse_weights(&a.weights)?;
            let g = sym.series(a.size)?;
            let report = cr_witness_family(&g, xi, a.t, a.k_max, &w, a.size)?;
            let inputs = json!({
                "symbol": sym.describe(),
                "xi": a.xi,
                "t": a.t,
                "k_max": a.k_max,
                "weights": a.weights,
                "size": a.size,
            });
            let artifact = match a.out.format_or(Format::Csv) {
                Format::Csv => {
                    let body: Vec<Vec<String>> = report
                        .rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.k.to_string(),
                                f17(r.norm_cf),
                                f17(r.norm_f),
                                f17(r.norm_cf.powf(1.0 / f64::from(r.k))),
                            ]
                        })
                        .collect();
                    csv("k,norm_cf,norm_f,rate", &body)
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct FamilyResult {
                        report: WitnessFamilyReport,
                    }
                    to_json(&Envelope {
                        schema_version: SCHEMA_VERSION,
                        command: "witness",
                        inputs,
                        result: FamilyResult { report },
                    })?
                }
            };
            a.out.write(&artifact)?;
            Ok(0)
        }
    }
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

fn cmd_fit(args: FitArgs) -> anyhow::Result<i32> {
    let w = parse_weights(&args.weights)?;
    let grid = parse_float_list(&args.grid)?;
    let kind = match args.kind {
        FitFamily::Normc => FitKind::NormC,
        FitFamily::Normb => FitKind::NormB,
        FitFamily::Hyperbolic => FitKind::Hyperbolic,
    };
    let report = exponent_fit(kind, &w, &grid, args.size)?;
    let pass = report.pass;

    let inputs = json!({
        "kind": format!("{:?}", kind),
        "weights": args.weights,
        "size": args.size,
        "grid": args.grid,
    });
    let artifact = match args.out.format_or(Format::Csv) {
        Format::Csv => {
            let body: Vec<Vec<String>> = report
                .points
                .iter()
                .map(|&(r, sigma)| vec![f17(r), f17(sigma)])
                .collect();
            csv("r,sigma", &body)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct FitResult {
                report: FitReport,
            }
            to_json(&Envelope {
                schema_version: SCHEMA_VERSION,
                command: "fit",
                inputs,
                result: FitResult { report },
            })?
        }
    };
    args.out.write(&artifact)?;
    Ok(if pass { 0 } else { 2 })
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

fn cmd_sweep(args: SweepArgs) -> anyhow::Result<i32> {
    let weight_texts: Vec<&str> = args.weights.split(';').collect();
    let mut weights = Vec::with_capacity(weight_texts.len());
    for text in &weight_texts {
        weights.push((text.to_string(), parse_weights(text)?));
    }

    enum Family {
        Involution { theta: f64, points: Vec<C64> },
        Hyperbolic { pulls: Vec<f64> },
    }
    let family = match (&args.z0, &args.r) {
        (Some(_), Some(_)) => bail!("pass exactly one of --z0 and --r, not both"),
        (None, None) => bail!("pass one of --z0 (involution family) or --r (hyperbolic family)"),
        (Some(z0), None) => Family::Involution {
            theta: args.theta,
            points: grammar::parse_complex_list(z0)?,
        },
        (None, Some(r)) => {
            let pulls = parse_float_list(r)?;
            for &p in &pulls {
                if !(p > 0.0 && p < 1.0) {
                    bail!("hyperbolic pull {p} lies outside (0, 1)");
                }
            }
            Family::Hyperbolic { pulls }
        }
    };
    let n = args.size;
    if n < 4 {
        bail!("--size must be at least 4");
    }
    let cols = args.cols.unwrap_or(n / 4).max(1);
    if cols > n {
        bail!("--cols must not exceed --size");
    }

    // The grid is materialized in its deterministic (weights-major) order;
    // workers then fill rows independently and the indexed collect puts them
    // back in that order regardless of scheduling.
    struct Job {
        weight_text: String,
        w: WeightSequence,
        family: &'static str,
        param_text: String,
        map: Moebius<C64>,
    }
    let mut jobs = Vec::new();
    for (wtext, w) in &weights {
        match &family {
            Family::Involution { theta, points } => {
                for &z0 in points {
                    jobs.push(Job {
                        weight_text: wtext.clone(),
                        w: w.clone(),
                        family: "involution",
                        param_text: complex_text(z0),
                        map: compop::moebius::disk_automorphism(*theta, z0)?,
                    });
                }
            }
            Family::Hyperbolic { pulls } => {
                for &r in pulls {
                    jobs.push(Job {
                        weight_text: wtext.clone(),
                        w: w.clone(),
                        family: "hyperbolic",
                        param_text: r.to_string(),
                        map: Moebius {
                            a: C64::new(1.0, 0.0),
                            b: C64::new(r, 0.0),
                            c: C64::new(r, 0.0),
                            d: C64::new(1.0, 0.0),
                        },
                    });
                }
            }
        }
    }

    #[derive(Serialize)]
    struct SweepRow {
        weight: String,
        family: &'static str,
        param: String,
        n: usize,
        value: f64,
    }
    let task = args.task;
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|job| -> anyhow::Result<SweepRow> {
            let section = mobius_composition_section(&job.map, &job.w, n)?;
            let value = match task {
                SweepTask::Norm => op_norm(&section)?,
                SweepTask::Floor => smallest_sv(&section, cols)?,
            };
            Ok(SweepRow {
                weight: job.weight_text.clone(),
                family: job.family,
                param: job.param_text.clone(),
                n,
                value,
            })
        })
        .collect::<anyhow::Result<Vec<_>>>()?;

    let inputs = json!({
        "task": match task { SweepTask::Norm => "norm", SweepTask::Floor => "floor" },
        "weights": args.weights,
        "z0": args.z0,
        "r": args.r,
        "size": n,
        "theta": args.theta,
        "cols": cols,
    });
    let artifact = match args.out.format_or(Format::Csv) {
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.weight.clone(),
                        r.family.to_string(),
                        r.param.clone(),
                        r.n.to_string(),
                        f17(r.value),
                    ]
                })
                .collect();
            csv("weight,family,param,n,value", &body)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct SweepResult {
                rows: Vec<SweepRow>,
            }
            to_json(&Envelope {
                schema_version: SCHEMA_VERSION,
                command: "sweep",
                inputs,
                result: SweepResult { rows },
            })?
        }
    };
    args.out.write(&artifact)?;
    Ok(0)
}
