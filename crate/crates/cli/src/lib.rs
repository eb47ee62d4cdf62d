//! Command-line surface for `sigpart`.
//!
//! Exit codes: 0 on success, 1 when a verification or threshold check fails
//! (or a numerical routine does not converge), 2 on invalid input or a
//! missing data file.

pub mod output;
pub mod verify;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use sigpart::phi0::{MuEnvelope, DEFAULT_SIGMA, DEFAULT_T_MAX};
use sigpart::residues::{residue, threshold_report};
use sigpart::{
    count_zeros, detect_strings, dyadic_count_check, load_zeros, partial_residue_sum,
    partition_table, phi0_line_integral, phi0_zero_sum, phi_profile, predict_logsc_p,
    tail_bound, trudgian_window, zero_inputs, Error, ExtReal, KernelKind, PartitionTable,
    PsiSeries, SignedWeight, ZeroTable,
};

pub use output::{emit_series_csv, emit_svg_plot, read_series_csv, render_svg, PlotLabels, Series};

/// Environment variable naming the default zero-table file.
pub const ZEROS_ENV: &str = "SIGPART_ZEROS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "sigpart", version, about = "Signed partition numbers and their asymptotics")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Zero-ordinate table (one ordinate per line). Defaults to $SIGPART_ZEROS,
    /// then to the built-in first 100 ordinates.
    #[arg(long, global = true)]
    pub zeros_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Phi0Route {
    Line,
    Zeros,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// logsc p(n, mu) and logsc p(n, lambda)
    Logsc,
    /// Möbius envelope against log10 x
    Envelope,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact table of p(n, f).
    Table {
        #[arg(long = "f")]
        weight: SignedWeight,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Reuse (or create) a tab-separated cache of exact values.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Zero counts against the explicit window and the dyadic bound.
    Zeros {
        #[arg(long)]
        height: Option<f64>,
    },
    /// Residues at tabulated zeros and their partial sum up to 2^K.
    Residues {
        #[arg(long, value_parser = parse_kernel)]
        kind: KernelKind,
        #[arg(long = "K")]
        k: u32,
        /// Print this many individual residues.
        #[arg(long, default_value_t = 5)]
        list: usize,
    },
    /// Compare c_0 with the residue sum plus tail bound.
    Threshold {
        #[arg(long = "C", value_parser = parse_ext)]
        c: ExtReal,
        #[arg(long = "K")]
        k: u32,
    },
    /// Saddle points and the phi / phi* profile at x.
    Saddle {
        #[arg(long = "f")]
        weight: SignedWeight,
        #[arg(long)]
        x: f64,
    },
    /// Predicted logsc p(n, f) and sign.
    Predict {
        #[arg(long = "f")]
        weight: SignedWeight,
        #[arg(long)]
        n: u64,
        /// Also compute the exact value for comparison.
        #[arg(long)]
        exact: bool,
    },
    /// phi_0(x) by line integral or truncated zero sum.
    Phi0 {
        #[arg(long, value_parser = parse_kernel)]
        kind: KernelKind,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = Phi0Route::Line)]
        method: Phi0Route,
        #[arg(long, default_value_t = DEFAULT_SIGMA)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_T_MAX)]
        t_max: f64,
    },
    /// First x at which the Möbius envelope turns positive.
    Crossing,
    /// SVG figures.
    Plot(PlotArgs),
    /// Run self-checks; exits 1 on any failure.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
        #[arg(long = "K", default_value_t = 15)]
        k: u32,
        #[arg(long = "C", value_parser = parse_ext, default_value = "1e17880")]
        c: ExtReal,
    },
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 250)]
    pub n_max: usize,
    /// Largest log10 x on the envelope plot.
    #[arg(long, default_value_t = 52.0)]
    pub log10_x_max: f64,
    #[arg(long, default_value_t = 1.0)]
    pub log10_x_min: f64,
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
}

fn parse_kernel(s: &str) -> Result<KernelKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_ext(s: &str) -> Result<ExtReal, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Flag, then environment, then the built-in table.
pub fn resolve_zero_table(flag: Option<&Path>) -> Result<ZeroTable> {
    let path = match flag {
        Some(p) => Some(p.to_path_buf()),
        None => std::env::var_os(ZEROS_ENV).map(PathBuf::from),
    };
    match path {
        Some(p) => {
            let file = File::open(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            Ok(load_zeros(BufReader::new(file))
                .with_context(|| format!("loading zeros from {}", p.display()))?)
        }
        None => Ok(ZeroTable::builtin()),
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::InvalidInput(_)
            | Error::Domain(_)
            | Error::Range(_)
            | Error::Parse { .. }
            | Error::Coverage { .. }
            | Error::Io(_)
            | Error::Cache(_)
            | Error::Resource(_)
            | Error::EnumerationTooLarge { .. }
            | Error::Pole { .. },
        ) => EXIT_INVALID,
        Some(_) => EXIT_FAILED,
        None if err.downcast_ref::<std::io::Error>().is_some() => EXIT_INVALID,
        None => EXIT_FAILED,
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_command<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match dispatch(&config, out) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_FAILED,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            exit_code(&e)
        }
    }
}

fn dispatch(config: &RunConfig, out: &mut dyn Write) -> Result<bool> {
    let zeros = || resolve_zero_table(config.zeros_file.as_deref());
    match &config.command {
        Command::Table {
            weight,
            n_max,
            out: path,
            format,
            cache,
        } => table(*weight, *n_max, path.as_deref(), *format, cache.as_deref(), out),
        Command::Zeros { height } => zeros_report(&zeros()?, *height, out),
        Command::Residues { kind, k, list } => residues(&zeros()?, *kind, *k, *list, out),
        Command::Threshold { c, k } => threshold(&zeros()?, *k, *c, out),
        Command::Saddle { weight, x } => saddle(*weight, *x, out),
        Command::Predict { weight, n, exact } => predict(*weight, *n, *exact, out),
        Command::Phi0 {
            kind,
            x,
            method,
            sigma,
            t_max,
        } => {
            let eval = match method {
                Phi0Route::Line => phi0_line_integral(*kind, *x, *sigma, *t_max)?,
                Phi0Route::Zeros => phi0_zero_sum(*kind, *x, &zeros()?)?,
            };
            writeln!(out, "phi0({}, x={}) = {:.9}", kind, x, eval.value)?;
            match method {
                Phi0Route::Line => writeln!(
                    out,
                    "line integral sigma={} Tmax={} error<={:.3e}",
                    sigma, t_max, eval.error_estimate
                )?,
                Phi0Route::Zeros => writeln!(
                    out,
                    "zero sum T_x={:.6} zeros={}",
                    eval.truncation_height, eval.zeros_used
                )?,
            }
            Ok(true)
        }
        Command::Crossing => {
            let env = MuEnvelope::from_table(&zeros()?)?;
            let x = env.first_positive_crossing();
            writeln!(out, "gamma1={:.9} b1={:.6e}", env.gamma1, env.b1)?;
            writeln!(out, "first positive envelope value at x={x:.6e} (log10 x = {:.4})", x.log10())?;
            Ok(true)
        }
        Command::Plot(args) => plot(args, &zeros()?, out),
        Command::Verify { suite, n_max, k, c } => {
            run_verify(*suite, *n_max, *k, *c, config.zeros_file.as_deref(), out)
        }
    }
}

fn load_or_compute(weight: SignedWeight, n_max: usize, cache: Option<&Path>) -> Result<PartitionTable> {
    if let Some(path) = cache {
        if path.exists() {
            let file = File::open(path)?;
            let table = PartitionTable::read_cache(BufReader::new(file))
                .with_context(|| format!("reading cache {}", path.display()))?;
            if table.weight() == weight && table.n_max() >= n_max {
                return Ok(table.truncated(n_max));
            }
        }
        let table = partition_table(weight, n_max)?;
        let file = File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
        table.write_cache(BufWriter::new(file))?;
        return Ok(table);
    }
    Ok(partition_table(weight, n_max)?)
}

fn table(
    weight: SignedWeight,
    n_max: usize,
    path: Option<&Path>,
    format: Format,
    cache: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    let table = load_or_compute(weight, n_max, cache)?;
    match (format, path) {
        (Format::Csv, Some(p)) => {
            let rows = emit_series_csv(&table, p)?;
            writeln!(out, "wrote {rows} rows to {}", p.display())?;
        }
        (Format::Csv, None) => {
            output::write_series_csv(&table, &mut *out)?;
        }
        (Format::Text, _) => {
            let mut sink: Box<dyn Write> = match path {
                Some(p) => Box::new(BufWriter::new(File::create(p)?)),
                None => Box::new(&mut *out),
            };
            writeln!(sink, "f = {weight}, n <= {n_max}")?;
            writeln!(sink, "zero values at n = {:?}", zero_inputs(&table))?;
            for s in detect_strings(&table, 10) {
                writeln!(sink, "{:?} sign string [{}, {}]", s.mode, s.start, s.end())?;
            }
            let last = table.values()[n_max].to_string();
            writeln!(sink, "p({n_max}) has {} digits, logsc = {:.6}", last.trim_start_matches('-').len(), table.logsc(n_max))?;
        }
    }
    Ok(true)
}

fn zeros_report(table: &ZeroTable, height: Option<f64>, out: &mut dyn Write) -> Result<bool> {
    writeln!(out, "{} ordinates, coverage {:.6}", table.len(), table.coverage())?;
    let mut ok = true;
    let heights: Vec<f64> = match height {
        Some(h) => vec![h],
        None => [50.0, 100.0, 500.0, 1000.0]
            .into_iter()
            .filter(|&h| h <= table.coverage())
            .collect(),
    };
    for h in heights {
        let n = count_zeros(table, h)?;
        let (lo, hi) = trudgian_window(h)?;
        let pass = (lo..=hi).contains(&(n as f64));
        ok &= pass;
        writeln!(out, "N({h}) = {n} window [{lo:.3}, {hi:.3}] {}", if pass { "ok" } else { "VIOLATED" })?;
    }
    for k in 5..=30u32 {
        if 2f64.powi(k as i32 + 1) > table.coverage() {
            break;
        }
        let r = dyadic_count_check(table, k)?;
        ok &= r.pass;
        writeln!(out, "k={k}: {} zeros in (2^k, 2^(k+1)], bound {}", r.actual, r.bound)?;
    }
    Ok(ok)
}

fn residues(table: &ZeroTable, kind: KernelKind, k: u32, list: usize, out: &mut dyn Write) -> Result<bool> {
    let height = 2f64.powi(k as i32);
    table.ensure_covers(height)?;
    for &g in table.up_to(height).iter().take(list) {
        let g = sigpart::refine_zero(g)?;
        let r = residue(kind, g)?;
        let c = r.value;
        writeln!(
            out,
            "gamma={g:.9} |c|={:.6} log|c|={:.6} arg={:.6}",
            r.abs_value, c.log_magnitude, c.phase
        )?;
    }
    let sum = partial_residue_sum(kind, table, k)?;
    let c0 = sigpart::c0_lambda();
    writeln!(out, "sum over {} zeros up to 2^{k}: {sum:.6}", table.up_to(height).len())?;
    writeln!(out, "c0={c0:.9}")?;
    writeln!(out, "margin={}", ExtReal::from_f64(c0) - sum)?;
    Ok(true)
}

fn threshold(table: &ZeroTable, k: u32, c: ExtReal, out: &mut dyn Write) -> Result<bool> {
    // Validate before the long residue sum.
    let tail = tail_bound(k, c)?;
    table.ensure_covers(2f64.powi(k as i32))?;
    let partial = partial_residue_sum(KernelKind::Lambda, table, k)?;
    let report = threshold_report(k, c, partial, tail)?;
    writeln!(out, "K={k} C={c}")?;
    writeln!(out, "c0={:.9}", report.c0)?;
    writeln!(out, "partial sum={:.6}", report.partial_sum)?;
    writeln!(out, "tail bound={:.6}", report.tail_bound)?;
    writeln!(out, "{}", if report.pass() { "threshold holds" } else { "threshold fails" })?;
    writeln!(out, "margin={}", report.threshold_margin)?;
    Ok(report.pass())
}

fn saddle(weight: SignedWeight, x: f64, out: &mut dyn Write) -> Result<bool> {
    let series = PsiSeries::for_saddle(weight, x)?;
    let p = phi_profile(&series, x)?;
    writeln!(out, "f={weight} x={x}")?;
    writeln!(out, "r={:.15} X={:.9} residual={:.3e}", p.r(), p.big_x(), p.plus.residual)?;
    writeln!(out, "r*={:.15} X*={:.9} residual={:.3e}", p.r_star(), p.big_x_star(), p.minus.residual)?;
    writeln!(out, "Psi(r)={:?} Psi(-r*)={:?}", p.psi_plus, p.psi_minus)?;
    writeln!(out, "phi={:.9} phi*={:.9}", p.phi, p.phi_star)?;
    Ok(true)
}

fn predict(weight: SignedWeight, n: u64, exact: bool, out: &mut dyn Write) -> Result<bool> {
    let series = PsiSeries::for_saddle(weight, n as f64)?;
    let p = predict_logsc_p(&series, n)?;
    writeln!(out, "f={weight} n={n} predicted logsc p={:.6} sign={:+}", p.value, p.sign)?;
    if p.indeterminate {
        writeln!(out, "warning: |phi*| = {:.3e} is too small to fix the sign", p.phi_star.abs())?;
    }
    if exact {
        let table = partition_table(weight, n as usize)?;
        let e = table.logsc(n as usize);
        writeln!(out, "exact logsc p={e:.6} sign={:+} relative error={:.3e}", table.sign(n as usize), ((p.value - e) / e).abs())?;
    }
    Ok(true)
}

/// Series for the `logsc` figure.
pub fn logsc_series(n_max: usize) -> Result<Vec<Series>> {
    [SignedWeight::Mu, SignedWeight::Lambda]
        .into_iter()
        .map(|f| {
            let t = partition_table(f, n_max)?;
            let pts = (1..=n_max).map(|n| (n as f64, t.logsc(n))).collect();
            Ok(Series::new(format!("logsc p(n, {f})"), pts))
        })
        .collect()
}

/// Envelope sampled uniformly in `log10 x`.
pub fn envelope_series(env: &MuEnvelope, lo: f64, hi: f64, samples: usize) -> Result<Series> {
    if !(samples >= 2 && hi > lo && lo > 0.0) {
        return Err(Error::InvalidInput("need a log10 range 0 < lo < hi and at least 2 samples".into()).into());
    }
    let pts = (0..samples)
        .map(|i| {
            let l = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            (l, env.at_log(l * std::f64::consts::LN_10))
        })
        .collect();
    Ok(Series::new("Möbius envelope", pts))
}

fn plot(args: &PlotArgs, table: &ZeroTable, out: &mut dyn Write) -> Result<bool> {
    let (series, labels) = match args.figure {
        Figure::Logsc => (
            logsc_series(args.n_max)?,
            PlotLabels {
                title: format!("logsc p(n, f), n <= {}", args.n_max),
                x: "n".into(),
                y: "logsc p(n, f)".into(),
            },
        ),
        Figure::Envelope => {
            let env = MuEnvelope::from_table(table)?;
            (
                vec![envelope_series(&env, args.log10_x_min, args.log10_x_max, args.samples)?],
                PlotLabels {
                    title: "-0.18 log^2 x - 2 b1 sin(gamma1 log(x) / 2) x^(1/4)".into(),
                    x: "log10 x".into(),
                    y: "envelope".into(),
                },
            )
        }
    };
    emit_svg_plot(&series, &labels, &args.out)?;
    writeln!(out, "wrote {}", args.out.display())?;
    Ok(true)
}

fn run_verify(
    suite: verify::Suite,
    n_max: usize,
    k: u32,
    c: ExtReal,
    zeros_file: Option<&Path>,
    out: &mut dyn Write,
) -> Result<bool> {
    use verify::Suite::*;
    let all = suite == All;
    let mut checks = Vec::new();
    if all || suite == ZeroLists {
        checks.extend(verify::zero_lists(n_max)?);
    }
    if all || suite == Oracle {
        checks.extend(verify::oracle()?);
    }
    if all || suite == Constants {
        checks.extend(verify::constants()?);
    }
    if all || suite == Signs {
        checks.extend(verify::signs()?);
    }
    if all || suite == Crossing {
        checks.extend(verify::crossing()?);
    }
    let needs_zeros = all || matches!(suite, Threshold | Trudgian | Phi0);
    if needs_zeros {
        let table = resolve_zero_table(zeros_file)?;
        if all || suite == Trudgian {
            checks.extend(verify::trudgian(&table)?);
        }
        if all || suite == Phi0 {
            checks.extend(verify::phi0(&table)?);
        }
        if all || suite == Threshold {
            checks.extend(verify::threshold(&table, k, c)?);
        }
    }
    let mut ok = true;
    for c in &checks {
        ok &= c.pass;
        writeln!(out, "{c}")?;
    }
    writeln!(out, "{} of {} checks passed", checks.iter().filter(|c| c.pass).count(), checks.len())?;
    Ok(ok)
}
