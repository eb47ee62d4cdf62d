//! Generates a table of zeta-zero ordinates up to a given height.
//!
//! Sign changes of Hardy's Z function are bracketed with the Riemann-Siegel
//! formula (leading correction term only), bisected, and every ordinate is
//! then polished by Newton iteration on the Euler-Maclaurin zeta from
//! `sigpart`. Output is the plain one-ordinate-per-line format read by
//! `sigpart --zeros-file`.
//!
//!     gen-zeros --height 33000 --out data/zeros.txt

use std::f64::consts::{PI, TAU};
use std::io::{BufWriter, Write};

use anyhow::{bail, Context, Result};
use clap::Parser;
use rayon::prelude::*;

#[derive(Parser, Debug)]
#[command(about = "Tabulate ordinates of critical-line zeta zeros")]
struct Args {
    /// Tabulate every ordinate in (0, height].
    #[arg(long, default_value_t = 33000.0)]
    height: f64,
    /// Output file.
    #[arg(long)]
    out: std::path::PathBuf,
    /// Scan steps per mean zero spacing.
    #[arg(long, default_value_t = 40.0)]
    oversample: f64,
    /// Decimal places written.
    #[arg(long, default_value_t = 9)]
    decimals: usize,
}

/// Riemann-Siegel theta function.
fn theta(t: f64) -> f64 {
    let x = t / TAU;
    0.5 * t * x.ln() - 0.5 * t - PI / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t.powi(3))
        + 31.0 / (80640.0 * t.powi(5))
}

/// Hardy's Z(t), Riemann-Siegel main sum plus the first remainder term.
fn hardy_z(t: f64) -> f64 {
    let a = (t / TAU).sqrt();
    let m = a.floor() as usize;
    let th = theta(t);
    let mut sum = 0.0;
    for n in 1..=m {
        let nf = n as f64;
        sum += (th - t * nf.ln()).cos() / nf.sqrt();
    }
    let mut p = a - m as f64;
    // C0 has removable singularities at p = 1/4 and 3/4.
    if (TAU * p).cos().abs() < 1e-9 {
        p += 1e-7;
    }
    let c0 = (TAU * (p * p - p - 1.0 / 16.0)).cos() / (TAU * p).cos();
    let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
    2.0 * sum + sign * (TAU / t).powf(0.25) * c0
}

/// Mean gap between consecutive ordinates near height t.
fn mean_spacing(t: f64) -> f64 {
    TAU / (t / TAU).ln().max(1.0)
}

fn bisect(mut lo: f64, mut hi: f64, mut zlo: f64) -> f64 {
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let zm = hardy_z(mid);
        if (zm < 0.0) == (zlo < 0.0) {
            lo = mid;
            zlo = zm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    0.5 * (lo + hi)
}

fn main() -> Result<()> {
    let args = Args::parse();
    if args.height < 15.0 {
        bail!("height must be at least 15");
    }
    // Scan in independent blocks so the work parallelises.
    let start = 10.0;
    let block = 250.0;
    let n_blocks = ((args.height - start) / block).ceil() as usize;
    let brackets: Vec<(f64, f64, f64)> = (0..n_blocks)
        .into_par_iter()
        .flat_map_iter(|b| {
            let lo = start + b as f64 * block;
            let hi = (lo + block).min(args.height);
            let mut out = Vec::new();
            let mut t = lo;
            let mut z = hardy_z(t);
            while t < hi {
                let next = (t + mean_spacing(t) / args.oversample).min(hi);
                let zn = hardy_z(next);
                if (z < 0.0) != (zn < 0.0) {
                    out.push((t, next, z));
                }
                t = next;
                z = zn;
            }
            out
        })
        .collect();
    eprintln!("{} sign changes bracketed", brackets.len());

    let coarse: Vec<f64> = brackets
        .par_iter()
        .map(|&(lo, hi, zlo)| bisect(lo, hi, zlo))
        .collect();
    let polished: Vec<f64> = coarse
        .par_iter()
        .map(|&g| sigpart::zeros::refine_zero(g).with_context(|| format!("refining {g}")))
        .collect::<Result<_>>()?;
    for w in polished.windows(2) {
        if w[1] <= w[0] {
            bail!("refinement merged or reordered ordinates near {}", w[0]);
        }
    }

    // Gram-point consistency: at a "good" Gram point g_n one expects N(g_n) = n + 1.
    let mut mismatches = 0;
    let mut n = 0i64;
    loop {
        let g = gram_point(n);
        if g > args.height {
            break;
        }
        if g > 20.0 && hardy_z(g) * if n % 2 == 0 { 1.0 } else { -1.0 } > 0.0 {
            let count = polished.partition_point(|&x| x <= g) as i64;
            if count != n + 1 {
                mismatches += 1;
                eprintln!("Gram point g_{n} = {g:.4}: N = {count}, expected {}", n + 1);
            }
        }
        n += 1;
    }
    eprintln!("{mismatches} good Gram points with an unexpected count");

    let file = std::fs::File::create(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(
        w,
        "# ordinates of zeta zeros on the critical line, 0 < gamma <= {}",
        args.height
    )?;
    for g in &polished {
        writeln!(w, "{:.*}", args.decimals, g)?;
    }
    w.flush()?;
    eprintln!("wrote {} ordinates", polished.len());
    Ok(())
}

/// Solves theta(g) = n pi by Newton's method.
fn gram_point(n: i64) -> f64 {
    let target = n as f64 * PI;
    let mut g = 18.0f64.max(TAU * (target / TAU).max(1.0));
    for _ in 0..100 {
        let f = theta(g) - target;
        let d = 0.5 * (g / TAU).ln();
        let step = f / d;
        g -= step;
        if step.abs() < 1e-12 * g {
            break;
        }
    }
    g
}
