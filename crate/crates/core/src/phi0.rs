//! `phi_0(x)`, the main term of `phi*(x)`, by two independent routes: the
//! vertical-line integral of the kernel times `x^{s/2}`, and the truncated
//! sum of residues at the origin (or at `s = 1/2`) and at zeta zeros.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::integrate;
use crate::residues::{c0_lambda, eta_fn, mu_origin_residue, residue, KernelKind};
use crate::special::{gamma_cx, zeta, LogPolarComplex};
use crate::zeros::{refine_zero, ZeroTable};

pub const DEFAULT_SIGMA: f64 = 0.8;
pub const DEFAULT_T_MAX: f64 = 60.0;
/// Absolute accuracy requested from each unit panel of the line integral.
pub const PANEL_TOLERANCE: f64 = 1e-11;
/// Coefficient of `log^2 x` in the rounded Möbius envelope.
pub const ENVELOPE_LOG_SQUARED: f64 = -0.18;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phi0Method {
    LineIntegral,
    ZeroSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phi0Evaluation {
    pub x: f64,
    pub kind: KernelKind,
    pub method: Phi0Method,
    pub value: f64,
    /// `Tmax` for the line integral, `T_x` for the zero sum.
    pub truncation_height: f64,
    pub sigma: Option<f64>,
    /// Quadrature error plus truncation bound, or zero for the zero sum.
    pub error_estimate: f64,
    /// Zeros used by the zero sum.
    pub zeros_used: usize,
}

/// `F(s)` for mu, `H(s)` for lambda.
pub fn kernel(kind: KernelKind, s: Complex64) -> Result<Complex64> {
    let gamma = gamma_cx(s)?.to_complex();
    let base = match kind {
        KernelKind::Mu => {
            (s * LN_2).exp() * (1.0 - (-(s + 1.0) * LN_2).exp()) / (1.0 - (-s * LN_2).exp())
                * zeta(s + 1.0)?
        }
        KernelKind::Lambda => eta_fn(s)? * zeta(2.0 * s)?,
    };
    Ok(base * gamma / zeta(s)?)
}

fn integrand(kind: KernelKind, log_x: f64, sigma: f64, t: f64) -> f64 {
    let s = Complex64::new(sigma, t);
    match kernel(kind, s) {
        Ok(k) => (k * (0.5 * s * log_x).exp()).re,
        Err(_) => f64::NAN,
    }
}

/// `(1/pi) Re int_0^Tmax K(sigma + it) x^{(sigma + it)/2} dt`.
pub fn phi0_line_integral(
    kind: KernelKind,
    x: f64,
    sigma: f64,
    t_max: f64,
) -> Result<Phi0Evaluation> {
    if !(sigma > 0.5 && sigma <= 1.5) {
        return Err(Error::InvalidInput(format!("sigma = {sigma} must lie in (0.5, 1.5]")));
    }
    if !(t_max >= 40.0) || !t_max.is_finite() {
        return Err(Error::InvalidInput(format!("Tmax = {t_max} must be at least 40")));
    }
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must exceed 1")));
    }
    let log_x = x.ln();
    let panels = t_max.ceil() as usize;
    let width = t_max / panels as f64;
    let parts = (0..panels)
        .into_par_iter()
        .map(|k| {
            let a = k as f64 * width;
            integrate(
                |t| integrand(kind, log_x, sigma, t),
                a,
                a + width,
                PANEL_TOLERANCE,
                0.0,
                40,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let value: f64 = parts.iter().map(|q| q.value).sum::<f64>() / PI;
    let quad_error: f64 = parts.iter().map(|q| q.error).sum::<f64>() / PI;
    // Beyond Tmax the Gamma factor decays like exp(-pi t / 2).
    let edge = kernel(kind, Complex64::new(sigma, t_max))?.norm() * x.powf(sigma / 2.0);
    let truncation = edge * 2.0 / (PI * PI);
    if !value.is_finite() {
        return Err(Error::Quadrature {
            tolerance: PANEL_TOLERANCE,
            estimate: f64::INFINITY,
        });
    }
    Ok(Phi0Evaluation {
        x,
        kind,
        method: Phi0Method::LineIntegral,
        value,
        truncation_height: t_max,
        sigma: Some(sigma),
        error_estimate: quad_error + truncation,
        zeros_used: 0,
    })
}

/// Zero-sum truncation height `log x + 1/2`.
pub fn zero_sum_height(x: f64) -> f64 {
    x.ln() + 0.5
}

/// `2 Re[c x^{rho/2}]` for `rho = 1/2 + i gamma`.
fn paired_term(c: LogPolarComplex, gamma: f64, log_x: f64) -> f64 {
    let w = LogPolarComplex::new(
        c.log_magnitude + 0.25 * log_x,
        c.phase + 0.5 * gamma * log_x,
    );
    2.0 * w.log_magnitude.exp() * w.phase.cos()
}

/// Residue at the origin (mu) or at `s = 1/2` (lambda) plus paired zero
/// residues below `T_x`.
pub fn phi0_zero_sum(kind: KernelKind, x: f64, table: &ZeroTable) -> Result<Phi0Evaluation> {
    if !(x > 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x = {x} must exceed 1")));
    }
    let height = zero_sum_height(x);
    table.ensure_covers(height)?;
    let zeros = table.below(height);
    let log_x = x.ln();
    let base = match kind {
        KernelKind::Lambda => -c0_lambda() * x.powf(0.25),
        KernelKind::Mu => mu_origin_residue(x)?,
    };
    let terms = zeros
        .par_iter()
        .map(|&g| {
            let g = refine_zero(g)?;
            Ok(paired_term(residue(kind, g)?.value, g, log_x))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Phi0Evaluation {
        x,
        kind,
        method: Phi0Method::ZeroSum,
        value: base + terms.iter().sum::<f64>(),
        truncation_height: height,
        sigma: None,
        error_estimate: 0.0,
        zeros_used: zeros.len(),
    })
}

/// `-0.18 log^2 x - 2 b sin(gamma log(x) / 2) x^{1/4}` with `b = Im c_rho1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuEnvelope {
    pub gamma1: f64,
    pub b1: f64,
}

impl MuEnvelope {
    pub fn from_table(table: &ZeroTable) -> Result<Self> {
        let first = *table
            .ordinates()
            .first()
            .ok_or_else(|| Error::InvalidInput("empty zero table".into()))?;
        let gamma1 = refine_zero(first)?;
        let b1 = residue(KernelKind::Mu, gamma1)?.value.to_complex().im;
        Ok(MuEnvelope { gamma1, b1 })
    }

    /// Envelope as a function of `u = log x`.
    pub fn at_log(&self, u: f64) -> f64 {
        ENVELOPE_LOG_SQUARED * u * u - 2.0 * self.b1 * (0.5 * self.gamma1 * u).sin() * (0.25 * u).exp()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.at_log(x.ln())
    }

    /// Smallest `x` with a positive envelope.
    pub fn first_positive_crossing(&self) -> f64 {
        let omega = 0.5 * self.gamma1;
        // Phases where the oscillation pushes upward.
        let peak_phase = if self.b1 > 0.0 { -0.5 * PI } else { 0.5 * PI };
        let mut k = 1.0;
        let peak = loop {
            let u = (peak_phase + 2.0 * PI * k) / omega;
            if self.at_log(u) > 0.0 {
                break u;
            }
            k += 1.0;
        };
        // The oscillation vanishes half a quarter-period before the peak.
        let mut lo = peak - 0.5 * PI / omega;
        let mut hi = peak;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.at_log(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut x = hi.exp();
        while self.value(x) <= 0.0 {
            x *= 1.0 + 4.0 * f64::EPSILON;
        }
        x
    }
}

/// Envelope with `gamma_1` and `c_rho1` taken from the built-in zero table.
pub fn mu_envelope(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::Domain(format!("x = {x} must exceed 1")));
    }
    Ok(MuEnvelope::from_table(&ZeroTable::builtin())?.value(x))
}

pub fn first_positive_crossing() -> Result<f64> {
    Ok(MuEnvelope::from_table(&ZeroTable::builtin())?.first_positive_crossing())
}
