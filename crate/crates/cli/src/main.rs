//! `holder` -- global Holder index estimation for sampled 1-D signals.
//!
//! Subcommands: `gen` (test-signal generators), `analyze` (full pipeline or
//! pyramid-only estimation), `criterion` (dump the gap-filling criterion
//! trace), `verify` (named property suites).
//!
//! Exit codes: 0 success, 2 usage or input error, 3 degenerate estimation
//! (a partial report is still emitted).

use clap::{Args, Parser, Subcommand};
use holder_core::error::HolderError;
use holder_core::estimate::FitWindow;
use holder_core::estimators::irregularity_criterion;
use holder_core::io::{read_signal, write_signal, Provenance};
use holder_core::pyramid::{pyramid_from_json, pyramid_to_json, CoeffPyramid};
use holder_core::report::{
    analyze_pyramid, analyze_signal, AnalysisReport, AnalyzeOptions, InputDescriptor, MPolicy,
};
use holder_core::verify::{run_suite, SUITES};
use holder_core::wavelet::WaveletSpec;
use holder_core::zoo::cex1::{cex1_signal, Cex1Params};
use holder_core::zoo::fabe::{FabeFunction, FABE_FREQ_CAP};
use holder_core::zoo::{gap_pyramid, weierstrass, weierstrass_warnings, BlockPattern};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "holder",
    version,
    about = "Lower and upper global Holder index estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a built-in test signal or pyramid
    Gen(GenArgs),
    /// Estimate both indices from a signal file or a pyramid JSON
    Analyze(AnalyzeArgs),
    /// Dump the per-scale irregularity criterion trace of a pyramid
    Criterion(CriterionArgs),
    /// Run a named verification suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(subcommand)]
    generator: Generator,
}

#[derive(Subcommand)]
enum Generator {
    /// Weierstrass-type sum `sum a^n cos(b^n pi x)` over one period
    Weierstrass {
        #[arg(long)]
        a: f64,
        #[arg(long, default_value_t = 2)]
        b: u32,
        /// Sample count (accepts 2^k syntax)
        #[arg(long, value_parser = parse_count)]
        n: usize,
        /// Term count (default: auto truncation)
        #[arg(long)]
        terms: Option<u32>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Disjoint wavelet-bump construction over doubly exponential blocks
    Cex1 {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 3)]
        ell0: u32,
        /// Number of blocks of the scale recursion
        #[arg(long, default_value_t = 3)]
        blocks: u32,
        #[arg(long, value_parser = parse_count, default_value = "65536")]
        n: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Lacunary sine series over geometric blocks
    Fabe {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        growth: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        nmax: u32,
        #[arg(long, value_parser = parse_count, default_value = "65536")]
        n: usize,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Synthetic lacunary pyramid `s_j = 2^(-j alpha)` on alive scales
    GapPyramid {
        #[arg(long)]
        alpha: f64,
        /// all-alive | alternating | powers-of-two
        #[arg(long, default_value = "alternating")]
        pattern: String,
        #[arg(long, default_value_t = 0)]
        jmin: i32,
        #[arg(long)]
        jmax: i32,
        #[arg(long, short)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Signal file (.f64 + sidecar, .csv) or pyramid JSON
    input: PathBuf,
    /// daubechies:N | dbN | meyer
    #[arg(long, default_value = "daubechies:4")]
    wavelet: String,
    /// auto | fixed difference order
    #[arg(long = "M", default_value = "auto")]
    m: String,
    /// Wavelet-side fit window `jmin:jmax`
    #[arg(long, value_parser = parse_window)]
    window: Option<FitWindow>,
    /// Modulus-side fit window `jmin:jmax`
    #[arg(long, value_parser = parse_window)]
    oracle_window: Option<FitWindow>,
    /// Keep seam-affected coefficients in the per-scale sups
    #[arg(long)]
    include_seam: bool,
    /// json | csv
    #[arg(long, default_value = "json")]
    format: String,
    /// Output path (default: stdout)
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CriterionArgs {
    /// Pyramid JSON
    input: PathBuf,
    /// Difference order
    #[arg(long = "M", default_value_t = 1)]
    m: u32,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: theta, criterion-equivalence, meyer, cex1, fabe, monofractal
    suite: String,
    /// json | text
    #[arg(long, default_value = "text")]
    format: String,
}

/// `65536` or `2^16`.
fn parse_count(text: &str) -> Result<usize, String> {
    if let Some(exp) = text.strip_prefix("2^") {
        let e: u32 = exp.parse().map_err(|e| format!("bad exponent: {e}"))?;
        if e > 30 {
            return Err("exponent above 30 is not a desk-scale sample count".into());
        }
        return Ok(1usize << e);
    }
    text.parse().map_err(|e| format!("bad count: {e}"))
}

/// `jmin:jmax`.
fn parse_window(text: &str) -> Result<FitWindow, String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("window '{text}' is not jmin:jmax"))?;
    let lo: i32 = lo.parse().map_err(|e| format!("bad jmin: {e}"))?;
    let hi: i32 = hi.parse().map_err(|e| format!("bad jmax: {e}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}:{hi}"));
    }
    Ok(FitWindow::new(lo, hi))
}

fn exit_code_for(err: &HolderError) -> u8 {
    match err {
        HolderError::Estimation(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("HOLDER_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn run(cli: Cli) -> holder_core::Result<ExitCode> {
    match cli.command {
        Command::Gen(args) => run_gen(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Criterion(args) => run_criterion(args),
        Command::Verify(args) => run_verify(args),
    }
}

fn run_gen(args: GenArgs) -> holder_core::Result<ExitCode> {
    match args.generator {
        Generator::Weierstrass {
            a,
            b,
            n,
            terms,
            out,
        } => {
            let signal = weierstrass(a, b, terms, n)?;
            for w in weierstrass_warnings(a, b) {
                eprintln!("warning: {w}");
            }
            let prov = Provenance {
                generator: "weierstrass".into(),
                params: serde_json::json!({
                    "a": a, "b": b, "n": n, "terms": terms,
                    "predicted_index": holder_core::zoo::weierstrass_predicted_index(a, b),
                }),
            };
            write_signal(&out, &signal, Some(prov))?;
            eprintln!("wrote {} samples to {}", signal.len(), out.display());
        }
        Generator::Cex1 {
            alpha,
            eps,
            ell0,
            blocks,
            n,
            out,
        } => {
            let params = Cex1Params {
                alpha,
                epsilon: eps,
                ell0,
                truncation_n: blocks,
            };
            let signal = cex1_signal(params, n)?;
            let prov = Provenance {
                generator: "cex1".into(),
                params: serde_json::json!({
                    "alpha": alpha, "eps": eps, "ell0": ell0, "blocks": blocks, "n": n,
                }),
            };
            write_signal(&out, &signal, Some(prov))?;
            eprintln!("wrote {} samples to {}", signal.len(), out.display());
        }
        Generator::Fabe {
            alpha,
            growth,
            eps,
            nmax,
            n,
            out,
        } => {
            let f = FabeFunction::build(
                holder_core::zoo::fabe::FabeParams {
                    alpha,
                    epsilon: eps,
                    beta_growth: growth,
                    n_max: nmax,
                },
                FABE_FREQ_CAP,
            )?;
            let signal = f.render(n)?;
            let prov = Provenance {
                generator: "fabe".into(),
                params: serde_json::json!({
                    "alpha": alpha, "growth": growth, "eps": eps, "nmax": nmax, "n": n,
                    "block_seq": f.block_seq[1..].to_vec(),
                    "truncated_at": f.truncated_at,
                }),
            };
            write_signal(&out, &signal, Some(prov))?;
            eprintln!("wrote {} samples to {}", signal.len(), out.display());
        }
        Generator::GapPyramid {
            alpha,
            pattern,
            jmin,
            jmax,
            out,
        } => {
            let p = gap_pyramid(alpha, &BlockPattern::parse(&pattern)?, jmin, jmax)?;
            std::fs::write(&out, pyramid_to_json(&p))?;
            eprintln!("wrote pyramid scales [{jmin}, {jmax}] to {}", out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

enum LoadedInput {
    Pyramid(CoeffPyramid),
    Signal(holder_core::SampledSignal, Option<Provenance>),
}

/// A `.json` input holding a pyramid selects estimator-only mode.
fn load_input(path: &Path) -> holder_core::Result<LoadedInput> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path)?;
        return Ok(LoadedInput::Pyramid(pyramid_from_json(&text)?));
    }
    let (signal, provenance) = read_signal(path)?;
    Ok(LoadedInput::Signal(signal, provenance))
}

fn run_analyze(args: AnalyzeArgs) -> holder_core::Result<ExitCode> {
    let opts = AnalyzeOptions {
        wavelet: WaveletSpec::parse(&args.wavelet)?,
        m_policy: MPolicy::parse(&args.m)?,
        window: args.window,
        oracle_window: args.oracle_window,
        include_seam: args.include_seam,
    };
    let report = match load_input(&args.input)? {
        LoadedInput::Pyramid(pyramid) => {
            let descriptor = InputDescriptor {
                kind: "pyramid".into(),
                path: Some(args.input.display().to_string()),
                length: pyramid.n_scales(),
                x0: None,
                dx: None,
                provenance: None,
            };
            analyze_pyramid(&pyramid, &opts, descriptor)?
        }
        LoadedInput::Signal(signal, provenance) => {
            let descriptor = InputDescriptor {
                kind: "signal".into(),
                path: Some(args.input.display().to_string()),
                length: signal.len(),
                x0: Some(signal.x0),
                dx: Some(signal.dx),
                provenance,
            };
            analyze_signal(&signal, &opts, descriptor)?
        }
    };

    let text = match args.format.as_str() {
        "json" => serde_json::to_string_pretty(&report)
            .map_err(|e| HolderError::Parse(format!("report serialization: {e}")))?,
        "csv" => report_csv(&report),
        other => return Err(HolderError::Parse(format!("unknown format '{other}'"))),
    };
    emit(args.out.as_deref(), &text)?;
    if report.degenerate {
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn report_csv(report: &AnalysisReport) -> String {
    let mut out = String::from(
        "method,value,regression_slope,residual_rms,window_lo,window_hi,skipped,flagged\n",
    );
    let rows = [
        ("oracle_lower", &report.estimates.oracle_lower),
        ("oracle_upper", &report.estimates.oracle_upper),
        ("wavelet_lower", &report.estimates.wavelet_lower),
        ("wavelet_upper", &report.estimates.wavelet_upper),
        ("naive_upper", &report.estimates.naive_upper),
    ];
    for (name, est) in rows {
        if let Some(e) = est {
            out.push_str(&format!(
                "{name},{},{},{},{},{},{},{}\n",
                e.value,
                e.diagnostics.regression_slope,
                e.diagnostics.residual_rms,
                e.fit_window.lo,
                e.fit_window.hi,
                e.diagnostics.skipped_scales.len(),
                e.diagnostics.non_representative,
            ));
        }
    }
    out
}

fn run_criterion(args: CriterionArgs) -> holder_core::Result<ExitCode> {
    let text = std::fs::read_to_string(&args.input)?;
    let pyramid = pyramid_from_json(&text)?;
    let trace = irregularity_criterion(&pyramid, args.m);
    let out = serde_json::to_string_pretty(&trace)
        .map_err(|e| HolderError::Parse(format!("trace serialization: {e}")))?;
    emit(args.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn run_verify(args: VerifyArgs) -> holder_core::Result<ExitCode> {
    if !SUITES.contains(&args.suite.as_str()) {
        return Err(HolderError::Parse(format!(
            "unknown suite '{}' (available: {})",
            args.suite,
            SUITES.join(", ")
        )));
    }
    let report = run_suite(&args.suite)?;
    match args.format.as_str() {
        "json" => println!(
            "{}",
            serde_json::to_string_pretty(&report)
                .map_err(|e| HolderError::Parse(format!("suite serialization: {e}")))?
        ),
        "text" => {
            for c in &report.checks {
                println!(
                    "[{}] {} -- {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            println!(
                "suite {}: {}",
                report.suite,
                if report.passed { "PASS" } else { "FAIL" }
            );
        }
        other => return Err(HolderError::Parse(format!("unknown format '{other}'"))),
    }
    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn emit(out: Option<&Path>, text: &str) -> holder_core::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}
