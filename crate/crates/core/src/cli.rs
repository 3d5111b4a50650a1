//! Command-line front end: `spectrum`, `cumulative`, `report`, `verify`,
//! `synth`.
//!
//! User-facing frequency flags are day periods (the natural axis label for
//! daily data); internally `w = 2*pi/period`. All heavy evaluation runs
//! through the grid contract, so identical input and flags produce
//! byte-identical output files for any worker count.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::detrend::{build_curve, DetrendedCurve};
use crate::error::{Error, Result};
use crate::ingest::{index_series, parse_prices, IndexedSeries};
use crate::measures::{
    self, cumulative, omega_from_days, ReportConfig,
};
use crate::oracle;
use crate::spectrum::{evaluate_grid, evaluate_grid_streamed, EvalOptions, GridSpec};
use crate::synth::{SynthKind, SynthSpec};

#[derive(Debug, Parser)]
#[command(
    name = "spectral-risk",
    about = "Spectral risk analysis of daily price series",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// Comma-separated columns.
    Columns,
    /// JSON documents.
    Structured,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Input price file (`YYYY-MM-DD,<close>` rows).
    #[arg(long)]
    pub input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Upper frequency bound as a day period; 1 means up to 1/(1 day) = 2*pi/day.
    #[arg(long, default_value_t = 1.0)]
    pub omega_max_days: f64,
    /// Grid points per spectral oscillation.
    #[arg(long, default_value_t = 1000)]
    pub points_per_osc: u32,
    /// Worker threads; all cores when omitted.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Columns)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate |f(w)| on the dense frequency grid and export it.
    Spectrum {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Export the cumulative spectrum F(w) and its normalization.
    Cumulative {
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Compute the scalar risk report (irrationality ratios, band shares,
    /// volatility).
    Report {
        #[command(flatten)]
        grid: GridArgs,
        /// Low-frequency cutoff period in days.
        #[arg(long, default_value_t = 10.0)]
        cut_days: f64,
        /// Bands as day-period pairs `lo:hi`, comma separated.
        #[arg(long, default_value = "50:1,5:1")]
        bands: String,
        /// Second input for a side-by-side comparison with shared settings.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Check the analytic transform against adaptive quadrature at random
    /// frequencies.
    Verify {
        /// Input price file.
        #[arg(long)]
        input: PathBuf,
        /// Number of random frequencies to sample.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Generate a synthetic price file in the ingest format.
    Synth {
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 100.0)]
        p0: f64,
        /// Per-day log growth rate.
        #[arg(long, default_value_t = 0.0)]
        rate: f64,
        /// Modulation depth.
        #[arg(long, default_value_t = 0.01)]
        epsilon: f64,
        /// Modulation period in days.
        #[arg(long, default_value_t = 3.0)]
        period: f64,
        /// Random-walk daily volatility.
        #[arg(long, default_value_t = 0.02)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Spectrum { grid } => cmd_spectrum(&grid),
        Command::Cumulative { grid } => cmd_cumulative(&grid),
        Command::Report {
            grid,
            cut_days,
            bands,
            compare,
        } => cmd_report(&grid, cut_days, &bands, compare.as_deref()),
        Command::Verify { input, samples } => cmd_verify(&input, samples),
        Command::Synth {
            kind,
            n,
            p0,
            rate,
            epsilon,
            period,
            sigma,
            seed,
            output,
        } => cmd_synth(&kind, n, p0, rate, epsilon, period, sigma, seed, output.as_deref()),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn load_series(path: &Path) -> Result<IndexedSeries> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))?;
    Ok(index_series(&parse_prices(&text)?))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn grid_spec(args: &GridArgs, curve: &DetrendedCurve) -> Result<GridSpec> {
    if !(args.omega_max_days > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "--omega-max-days must be positive, got {}",
            args.omega_max_days
        )));
    }
    let spec = GridSpec {
        omega_max: omega_from_days(args.omega_max_days),
        points_per_oscillation: args.points_per_osc,
        span_days: curve.span_days(),
    };
    spec.validate()?;
    Ok(spec)
}

fn eval_options(args: &GridArgs) -> EvalOptions {
    EvalOptions {
        workers: args.workers,
        ..Default::default()
    }
}

/// Streamed spectrum export. A fluctuation-free input still writes the (zero)
/// spectrum but warns that there is no risk signal.
fn cmd_spectrum(args: &GridArgs) -> Result<i32> {
    let started = Instant::now();
    let series = load_series(&args.input)?;
    let curve = build_curve(&series);
    let spec = grid_spec(args, &curve)?;
    let mut out = open_output(args.output.as_deref())?;
    if args.format == OutputFormat::Columns {
        writeln!(out, "omega,re,im,abs")?;
    }
    let mut max_abs = 0.0f64;
    let structured = args.format == OutputFormat::Structured;
    let io_result = evaluate_grid_streamed(
        &curve,
        &spec,
        &eval_options(args),
        1 << 16,
        |base, chunk: &[Complex64]| -> std::io::Result<()> {
            for (i, v) in chunk.iter().enumerate() {
                let omega = spec.omega(base + i);
                let a = v.norm();
                if a > max_abs {
                    max_abs = a;
                }
                if structured {
                    writeln!(
                        out,
                        "{{\"omega\":{omega},\"re\":{},\"im\":{},\"abs\":{a}}}",
                        v.re, v.im
                    )?;
                } else {
                    writeln!(out, "{omega},{},{},{a}", v.re, v.im)?;
                }
            }
            Ok(())
        },
    )?;
    io_result?;
    out.flush()?;
    if max_abs <= measures::NO_SIGNAL_FLOOR_REL * curve.p0() {
        eprintln!("warning: spectrum is numerically zero - no risk signal");
    }
    eprintln!(
        "N={} T={} M={} wall={:.3}s",
        series.len(),
        curve.span_days(),
        spec.point_count(),
        started.elapsed().as_secs_f64()
    );
    Ok(0)
}

fn cmd_cumulative(args: &GridArgs) -> Result<i32> {
    let started = Instant::now();
    let series = load_series(&args.input)?;
    let curve = build_curve(&series);
    let spec = grid_spec(args, &curve)?;
    let grid = evaluate_grid(&curve, &spec, &eval_options(args))?;
    if grid
        .amplitudes()
        .iter()
        .all(|&a| a <= measures::NO_SIGNAL_FLOOR_REL * curve.p0())
    {
        return Err(Error::NoRiskSignal);
    }
    let cs = cumulative(&grid)?;
    let mut out = open_output(args.output.as_deref())?;
    if args.format == OutputFormat::Columns {
        writeln!(out, "omega,F,Fnorm")?;
    }
    for j in 0..cs.len() {
        let omega = spec.omega(j);
        if args.format == OutputFormat::Structured {
            writeln!(
                out,
                "{{\"omega\":{omega},\"F\":{},\"Fnorm\":{}}}",
                cs.f()[j],
                cs.fnorm(j)
            )?;
        } else {
            writeln!(out, "{omega},{},{}", cs.f()[j], cs.fnorm(j))?;
        }
    }
    out.flush()?;
    eprintln!(
        "N={} T={} M={} Ftot={} wall={:.3}s",
        series.len(),
        curve.span_days(),
        spec.point_count(),
        cs.ftot(),
        started.elapsed().as_secs_f64()
    );
    Ok(0)
}

fn parse_bands(bands: &str) -> Result<Vec<(f64, f64)>> {
    let mut parsed = Vec::new();
    for part in bands.split(',') {
        let (lo, hi) = part.split_once(':').ok_or_else(|| {
            Error::InvalidBand {
                lo: f64::NAN,
                hi: f64::NAN,
            }
        })?;
        let lo_days: f64 = lo
            .trim()
            .parse()
            .map_err(|_| Error::InvalidCutoff(format!("bad band period {lo:?}")))?;
        let hi_days: f64 = hi
            .trim()
            .parse()
            .map_err(|_| Error::InvalidCutoff(format!("bad band period {hi:?}")))?;
        if !(lo_days > hi_days && hi_days > 0.0) {
            return Err(Error::InvalidCutoff(format!(
                "band {part:?}: periods must satisfy lo > hi > 0 days"
            )));
        }
        parsed.push((lo_days, hi_days));
    }
    if parsed.is_empty() {
        return Err(Error::InvalidCutoff("no bands given".into()));
    }
    Ok(parsed)
}

fn report_one(
    path: &Path,
    config: &ReportConfig,
) -> Result<std::result::Result<measures::RiskReport, String>> {
    let series = load_series(path)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    match measures::build_report(&series, &id, config) {
        Ok(report) => Ok(Ok(report)),
        Err(Error::NoRiskSignal) => Ok(Err(id)),
        Err(e) => Err(e),
    }
}

fn write_report(
    out: &mut dyn Write,
    format: OutputFormat,
    result: &std::result::Result<measures::RiskReport, String>,
) -> Result<()> {
    match (format, result) {
        (OutputFormat::Structured, Ok(report)) => {
            writeln!(out, "{}", serde_json::to_string_pretty(report).expect("serializable"))?;
        }
        (OutputFormat::Structured, Err(id)) => {
            writeln!(
                out,
                "{{\n  \"series_id\": {},\n  \"outcome\": \"no risk signal\"\n}}",
                serde_json::to_string(id).expect("serializable")
            )?;
        }
        (OutputFormat::Columns, Ok(report)) => {
            writeln!(out, "series_id={}", report.series_id)?;
            writeln!(out, "n={}", report.n)?;
            writeln!(
                out,
                "irrationality_continuous={}",
                report.irrationality_continuous
            )?;
            writeln!(
                out,
                "irrationality_discrete={}",
                report.irrationality_discrete
            )?;
            writeln!(out, "volatility_annualized={}", report.volatility_annualized)?;
            for b in &report.band_shares {
                writeln!(
                    out,
                    "band_share,{},{},{}",
                    b.lo_days, b.hi_days, b.share
                )?;
            }
        }
        (OutputFormat::Columns, Err(id)) => {
            writeln!(out, "series_id={id}")?;
            writeln!(out, "outcome=no risk signal")?;
        }
    }
    Ok(())
}

fn cmd_report(
    args: &GridArgs,
    cut_days: f64,
    bands: &str,
    compare: Option<&Path>,
) -> Result<i32> {
    if !(cut_days > 0.0) {
        return Err(Error::InvalidCutoff(format!(
            "--cut-days must be positive, got {cut_days}"
        )));
    }
    let config = ReportConfig {
        omega_max: omega_from_days(args.omega_max_days),
        points_per_oscillation: args.points_per_osc,
        omega_cut_days: cut_days,
        bands_days: parse_bands(bands)?,
        max_harmonic: None,
        eval: eval_options(args),
    };
    let mut out = open_output(args.output.as_deref())?;
    let first = report_one(&args.input, &config)?;
    write_report(&mut *out, args.format, &first)?;
    if let Some(second_path) = compare {
        let second = report_one(second_path, &config)?;
        write_report(&mut *out, args.format, &second)?;
    }
    out.flush()?;
    if let Err(id) = &first {
        eprintln!("warning: {id}: no risk signal");
    }
    Ok(0)
}

fn cmd_verify(input: &Path, samples: usize) -> Result<i32> {
    let series = load_series(input)?;
    let curve = build_curve(&series);
    let kernel = crate::spectrum::TransformKernel::new(&curve);
    let outcome = oracle::verify_curve(&curve, samples.max(100), 0x5eed, |w| kernel.eval(w));
    println!(
        "sampled {} frequencies, max relative deviation {:.3e} at omega={}",
        outcome.samples, outcome.max_deviation, outcome.worst_omega
    );
    if outcome.passed() {
        Ok(0)
    } else {
        eprintln!(
            "verification FAILED: deviation {:.3e} at omega={} exceeds 1e-9",
            outcome.max_deviation, outcome.worst_omega
        );
        Ok(2)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_synth(
    kind: &str,
    n: usize,
    p0: f64,
    rate: f64,
    epsilon: f64,
    period: f64,
    sigma: f64,
    seed: u64,
    output: Option<&Path>,
) -> Result<i32> {
    let spec = SynthSpec {
        kind: kind.parse::<SynthKind>()?,
        n,
        p0,
        rate,
        epsilon,
        period,
        sigma,
        seed,
    };
    let text = crate::synth::render_input_file(&spec)?;
    let mut out = open_output(output)?;
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(0)
}
