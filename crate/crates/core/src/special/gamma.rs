//! Complex log-gamma by Stirling's series with upward recurrence.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::ext::LogPolarComplex;
use crate::error::{Error, Result};

/// Stirling's series is used once `|z|` reaches this.
const STIRLING_RADIUS: f64 = 15.0;

/// `B_{2k} / (2k (2k - 1))` for `k = 1..=10`.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// `log Gamma(z)` on some branch; the imaginary part is only meaningful mod 2 pi.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 {
        return Err(Error::Pole {
            function: "gamma",
            at: format!("s = {}", z.re),
        });
    }
    let mut w = z;
    let mut shift_log = Complex64::new(0.0, 0.0);
    while w.norm() < STIRLING_RADIUS {
        shift_log += w.ln();
        w += 1.0;
    }
    let half_ln_tau = 0.5 * (2.0 * PI).ln();
    let mut series = (w - 0.5) * w.ln() - w + half_ln_tau;
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    Ok(series - shift_log)
}

/// `Gamma(s)` in log-polar form, so values like `Gamma(1/2 + 32768 i)` stay finite.
pub fn gamma_cx(s: Complex64) -> Result<LogPolarComplex> {
    let lg = ln_gamma(s)?;
    Ok(LogPolarComplex::new(lg.re, lg.im))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_and_integers() {
        let g = gamma_cx(Complex64::new(0.5, 0.0)).unwrap();
        assert!((g.log_magnitude - 0.5 * PI.ln()).abs() < 1e-14);
        assert!(g.phase.abs() < 1e-14);
        let g = gamma_cx(Complex64::new(6.0, 0.0)).unwrap();
        assert!((g.log_magnitude - 120f64.ln()).abs() < 1e-13);
        assert!(gamma_cx(Complex64::new(-3.0, 0.0)).is_err());
        assert!(gamma_cx(Complex64::new(0.0, 0.0)).is_err());
        let g = gamma_cx(Complex64::new(-0.5, 0.0)).unwrap();
        assert!((g.to_complex().re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn critical_line_modulus() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        for t in [1.0f64, 10.0, 100.0, 32768.0] {
            let g = gamma_cx(Complex64::new(0.5, t)).unwrap();
            // log cosh(pi t) without overflow
            let pt = PI * t;
            let log_cosh = pt + (-2.0 * pt).exp().ln_1p() - std::f64::consts::LN_2;
            let expected = PI.ln() - log_cosh;
            assert!(
                (2.0 * g.log_magnitude - expected).abs() <= 1e-12 * expected.abs().max(1.0),
                "t = {t}"
            );
        }
    }

    #[test]
    fn recurrence() {
        for s in [Complex64::new(3.0, 4.0), Complex64::new(0.2, -7.0), Complex64::new(-2.5, 1.0)] {
            let lhs = gamma_cx(s + 1.0).unwrap();
            let rhs = LogPolarComplex::from(s) * gamma_cx(s).unwrap();
            assert!((lhs.log_magnitude - rhs.log_magnitude).abs() < 1e-12);
            let dphi = super::super::ext::wrap_phase(lhs.phase - rhs.phase);
            assert!(dphi.abs() < 1e-12);
        }
    }

    #[test]
    fn conjugation_and_decay() {
        let s = Complex64::new(0.8, 23.0);
        let a = gamma_cx(s).unwrap();
        let b = gamma_cx(s.conj()).unwrap();
        assert!((a.log_magnitude - b.log_magnitude).abs() < 1e-13);
        assert!((a.phase + b.phase).abs() < 1e-11);
        // log|Gamma| + pi|t|/2 grows like (sigma - 1/2) log|t|.
        for sigma in [0.0, 1.0, 2.0] {
            let at = |t: f64| gamma_cx(Complex64::new(sigma, t)).unwrap().log_magnitude + PI * t / 2.0;
            let (g1, g2) = (at(100.0), at(10000.0));
            let slope = (g2 - g1) / (10000f64.ln() - 100f64.ln());
            assert!((slope - (sigma - 0.5)).abs() < 0.01, "sigma {sigma}: {slope}");
        }
    }
}
