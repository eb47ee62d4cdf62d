//! Residues of the Dirichlet-series kernels whose contour integrals give
//! `phi_0(x)`.
//!
//! * Liouville kernel `H(s) = eta(s) zeta(2s) Gamma(s) / zeta(s)` with
//!   `eta(s) = (kappa/zfrak)^s (1 - 2^{-s-1}) zeta(s+1)`.
//! * Möbius kernel `F(s) = 2^s (1 - 2^{-s-1}) / (1 - 2^{-s}) zeta(s+1) Gamma(s) / zeta(s)`.
//!
//! At a simple zero `rho` of zeta the residue is the kernel with `1/zeta(s)`
//! replaced by `1/zeta'(rho)`. Magnitudes fall like `exp(-pi gamma / 2)`, so
//! every product is formed in log-polar form.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::constants::KAPPA_OVER_ZFRAK;
use crate::special::{
    ext_sum, gamma_cx, zeta, zeta_prime, ExtReal, LogPolarComplex, ELL_2, ELL_PI,
};
use crate::zeros::ZeroTable;

/// Below this `|zeta'(rho)|` a zero is treated as possibly multiple.
pub const SIMPLE_ZERO_THRESHOLD: f64 = 1e-8;

/// Factor in the per-zero bound `|c_rho| <= 31 C log(gamma) exp(-pi gamma / 2)`.
pub const RESIDUE_BOUND_FACTOR: f64 = 31.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Mu,
    Lambda,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Mu => "mu",
            KernelKind::Lambda => "lambda",
        }
    }
}

impl std::str::FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu" => Ok(KernelKind::Mu),
            "lambda" => Ok(KernelKind::Lambda),
            other => Err(Error::InvalidInput(format!(
                "unknown kernel '{other}' (expected mu or lambda)"
            ))),
        }
    }
}

impl std::fmt::Display for KernelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueRecord {
    pub gamma: f64,
    pub kind: KernelKind,
    pub value: LogPolarComplex,
    pub abs_value: ExtReal,
}

/// `eta(s) = (kappa/zfrak)^s (1 - 2^{-s-1}) zeta(s + 1)`.
pub fn eta_fn(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole {
            function: "eta",
            at: "s = 0".into(),
        });
    }
    let scale = (s * KAPPA_OVER_ZFRAK.ln()).exp();
    let damp = 1.0 - (-(s + 1.0) * LN_2).exp();
    Ok(scale * damp * zeta(s + 1.0)?)
}

fn rho(gamma: f64) -> Result<Complex64> {
    if gamma == 0.0 || !gamma.is_finite() {
        return Err(Error::InvalidInput(format!("ordinate {gamma} must be nonzero")));
    }
    Ok(Complex64::new(0.5, gamma))
}

fn reciprocal_derivative(gamma: f64, s: Complex64) -> Result<LogPolarComplex> {
    let d = zeta_prime(s)?;
    if d.norm() < SIMPLE_ZERO_THRESHOLD {
        return Err(Error::NonSimpleZero {
            gamma,
            derivative: d.norm(),
        });
    }
    Ok(LogPolarComplex::from(d).recip())
}

fn record(gamma: f64, kind: KernelKind, value: LogPolarComplex) -> ResidueRecord {
    ResidueRecord {
        gamma,
        kind,
        value,
        abs_value: value.magnitude(),
    }
}

/// `Res_{s=rho} H(s) = eta(rho) zeta(2 rho) Gamma(rho) / zeta'(rho)`.
pub fn residue_lambda(gamma: f64) -> Result<ResidueRecord> {
    let s = rho(gamma)?;
    let value = LogPolarComplex::from(eta_fn(s)?)
        * LogPolarComplex::from(zeta(2.0 * s)?)
        * gamma_cx(s)?
        * reciprocal_derivative(gamma, s)?;
    Ok(record(gamma, KernelKind::Lambda, value))
}

/// `Res_{s=rho} F(s) = 2^rho (1 - 2^{-rho-1}) / (1 - 2^{-rho}) zeta(rho + 1) Gamma(rho) / zeta'(rho)`.
pub fn residue_mu(gamma: f64) -> Result<ResidueRecord> {
    let s = rho(gamma)?;
    let two_s = LogPolarComplex::exp(s * LN_2);
    let ratio = (1.0 - (-(s + 1.0) * LN_2).exp()) / (1.0 - (-s * LN_2).exp());
    let value = two_s
        * LogPolarComplex::from(ratio)
        * LogPolarComplex::from(zeta(s + 1.0)?)
        * gamma_cx(s)?
        * reciprocal_derivative(gamma, s)?;
    Ok(record(gamma, KernelKind::Mu, value))
}

pub fn residue(kind: KernelKind, gamma: f64) -> Result<ResidueRecord> {
    match kind {
        KernelKind::Mu => residue_mu(gamma),
        KernelKind::Lambda => residue_lambda(gamma),
    }
}

/// `c_0 = -Res_{s=1/2} H(s) = -(1/2) eta(1/2) Gamma(1/2) / zeta(1/2)`, about 1.28.
pub fn c0_lambda() -> f64 {
    let half = Complex64::new(0.5, 0.0);
    let eta = eta_fn(half).expect("eta is regular at 1/2").re;
    let z = zeta(half).expect("zeta is regular at 1/2").re;
    -0.5 * eta * PI.sqrt() / z
}

/// Coefficients `(a, b, c)` of `Res_{s=0}[F(s) x^{s/2}] = a log^2 x + b log x + c`.
pub fn mu_origin_coefficients() -> (f64, f64, f64) {
    let (l2, lp) = (ELL_2, ELL_PI);
    let a = -1.0 / (8.0 * l2);
    let b = -(3.0 * l2 - 2.0 * lp) / (4.0 * l2);
    let c = -(PI * PI + 2.0 * (l2 * l2 - 18.0 * l2 * lp + 6.0 * lp * lp)) / (24.0 * l2);
    (a, b, c)
}

/// Residue of `F(s) x^{s/2}` at its triple pole `s = 0`.
pub fn mu_origin_residue(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!("origin residue needs x > 1, got {x}")));
    }
    let (a, b, c) = mu_origin_coefficients();
    let l = x.ln();
    Ok(a * l * l + b * l + c)
}

/// `sum_{0 < gamma <= 2^K} |c_rho|` over the tabulated ordinates.
pub fn partial_residue_sum(kind: KernelKind, table: &ZeroTable, k: u32) -> Result<ExtReal> {
    let height = 2f64.powi(k as i32);
    table.ensure_covers(height)?;
    partial_residue_sum_to(kind, table, height)
}

/// Sum of `|c_rho|` over tabulated ordinates in `(0, height]`.
pub fn partial_residue_sum_to(kind: KernelKind, table: &ZeroTable, height: f64) -> Result<ExtReal> {
    let terms: Vec<ExtReal> = table
        .up_to(height)
        .par_iter()
        .map(|&g| residue(kind, g).map(|r| r.abs_value))
        .collect::<Result<_>>()?;
    Ok(ext_sum(&terms))
}

/// `|1/zeta'(rho)| / |rho|`, the smallest constant that satisfies the
/// effective-simplicity bound at this zero.
pub fn effective_simplicity_constant(gamma: f64) -> Result<f64> {
    let s = rho(gamma)?;
    Ok(1.0 / (zeta_prime(s)?.norm() * s.norm()))
}

/// `31 C log(gamma) exp(-pi gamma / 2)`.
pub fn residue_majorant(gamma: f64, c: f64) -> ExtReal {
    ExtReal::from_ln(-PI * gamma.abs() / 2.0, 1)
        * ExtReal::from_f64(RESIDUE_BOUND_FACTOR * c * gamma.abs().ln())
}

/// Geometric-dominance log-ratio below which the tail series is cut.
const TAIL_CUTOFF: f64 = -1000.0;

/// `31 C sum_{j >= 1} exp(-(pi/5) 2^{K+j})`, evaluated in log space.
pub fn tail_bound(k: u32, c: ExtReal) -> Result<ExtReal> {
    if k <= 5 {
        return Err(Error::Domain(format!("tail bound holds for K > 5, got {k}")));
    }
    if k > 1000 {
        return Err(Error::Range(format!("K = {k} is too large")));
    }
    if c.sign() <= 0 {
        return Err(Error::InvalidInput("the constant C must be positive".into()));
    }
    let log_term = |j: u32| -(PI / 5.0) * 2f64.powi((k + j) as i32);
    let first = log_term(1);
    let mut terms = Vec::new();
    let mut j = 1;
    loop {
        let lt = log_term(j);
        if lt - first < TAIL_CUTOFF {
            break;
        }
        terms.push(ExtReal::from_ln(lt, 1));
        j += 1;
    }
    Ok(ext_sum(&terms) * ExtReal::from_f64(RESIDUE_BOUND_FACTOR) * c)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBoundReport {
    pub k: u32,
    pub c: ExtReal,
    pub c0: f64,
    pub partial_sum: ExtReal,
    pub tail_bound: ExtReal,
    /// `c_0 - (partial_sum + tail_bound)`
    pub threshold_margin: ExtReal,
}

impl TailBoundReport {
    pub fn pass(&self) -> bool {
        self.threshold_margin.sign() > 0
    }
}

/// Compares `c_0` with the Liouville residue sum plus its tail bound.
pub fn threshold_check(table: &ZeroTable, k: u32, c: ExtReal) -> Result<TailBoundReport> {
    let tail = tail_bound(k, c)?;
    let partial = partial_residue_sum(KernelKind::Lambda, table, k)?;
    threshold_report(k, c, partial, tail)
}

/// Assembles a report from an already computed partial sum.
pub fn threshold_report(
    k: u32,
    c: ExtReal,
    partial_sum: ExtReal,
    tail_bound: ExtReal,
) -> Result<TailBoundReport> {
    let c0 = c0_lambda();
    let margin = ExtReal::from_f64(c0) - (partial_sum + tail_bound);
    Ok(TailBoundReport {
        k,
        c,
        c0,
        partial_sum,
        tail_bound,
        threshold_margin: margin,
    })
}
