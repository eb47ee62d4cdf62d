//! Riemann zeta function by Euler-Maclaurin summation.
//!
//! With `N` terms summed directly the remainder after the `k`-th Bernoulli
//! correction shrinks roughly like `(|s| / (2 pi N))^(2k)`, so taking
//! `N >= 1.2 |t|` makes every correction term small and the accuracy nearly
//! uniform in height.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `|t|` accepted.
pub const MAX_HEIGHT: f64 = 1e5;
/// Smallest real part accepted.
pub const MIN_SIGMA: f64 = -20.0;
/// Relative accuracy requested by [`zeta`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MIN_TERMS: usize = 30;
const MIN_CORRECTIONS: usize = 8;

/// `(numerator, denominator)` of `B_2, B_4, ..., B_30`.
const BERNOULLI: [(f64, f64); 15] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
];

/// `B_{2k} / (2k)!` for `k = 1..=15`.
fn correction_coefficients() -> &'static [f64; 15] {
    static COEFFS: OnceLock<[f64; 15]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let mut out = [0.0; 15];
        let mut factorial = 1.0f64;
        for (k, &(num, den)) in BERNOULLI.iter().enumerate() {
            let two_k = 2 * (k + 1);
            factorial *= ((two_k - 1) * two_k) as f64;
            out[k] = num / den / factorial;
        }
        out
    })
}

fn check_domain(s: Complex64) -> Result<()> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "zeta",
            at: "s = 1".into(),
        });
    }
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite argument {s}")));
    }
    if s.im.abs() > MAX_HEIGHT {
        return Err(Error::Range(format!(
            "|Im s| = {} exceeds the supported height {MAX_HEIGHT}",
            s.im.abs()
        )));
    }
    if s.re < MIN_SIGMA {
        return Err(Error::Range(format!(
            "Re s = {} is below the supported {MIN_SIGMA}",
            s.re
        )));
    }
    Ok(())
}

/// `n^{-s}` for `n >= 1`.
#[inline]
fn pow_neg(ln_n: f64, s: Complex64) -> Complex64 {
    let mag = (-s.re * ln_n).exp();
    let (sin, cos) = (s.im * ln_n).sin_cos();
    Complex64::new(mag * cos, -mag * sin)
}

struct Evaluation {
    value: Complex64,
    derivative: Complex64,
}

fn euler_maclaurin(s: Complex64, tolerance: f64, with_derivative: bool) -> Evaluation {
    let n_terms = MIN_TERMS
        .max((1.2 * s.im.abs()).ceil() as usize)
        .max((2.0 * s.norm()).ceil() as usize);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut dsum = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        let ln_n = (n as f64).ln();
        let term = pow_neg(ln_n, s);
        sum += term;
        if with_derivative {
            dsum -= term * ln_n;
        }
    }

    let big_n = n_terms as f64;
    let ln_big_n = big_n.ln();
    let n_pow = pow_neg(ln_big_n, s); // N^{-s}
    let one = Complex64::new(1.0, 0.0);
    let tail = n_pow * big_n / (s - one);
    sum += tail + 0.5 * n_pow;
    if with_derivative {
        dsum += -tail * ln_big_n - tail / (s - one) - 0.5 * ln_big_n * n_pow;
    }

    // k-th correction: c_k * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
    let coeffs = correction_coefficients();
    let mut poly = s;
    let mut dpoly = one;
    let mut power = n_pow / big_n;
    for (k, &c) in coeffs.iter().enumerate() {
        let term = c * poly * power;
        sum += term;
        if with_derivative {
            dsum += c * (dpoly - ln_big_n * poly) * power;
        }
        if k + 1 >= MIN_CORRECTIONS && term.norm() <= tolerance * 1e-3 * sum.norm() {
            break;
        }
        for shift in [2 * k + 1, 2 * k + 2] {
            let factor = s + shift as f64;
            dpoly = dpoly * factor + poly;
            poly *= factor;
        }
        power /= big_n * big_n;
    }
    Evaluation {
        value: sum,
        derivative: dsum,
    }
}

/// `zeta(s)` to the default relative tolerance.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    zeta_with_tolerance(s, DEFAULT_TOLERANCE)
}

/// `zeta(s)` stopping the Bernoulli corrections once they fall below
/// `tolerance` relative to the running value.
pub fn zeta_with_tolerance(s: Complex64, tolerance: f64) -> Result<Complex64> {
    check_domain(s)?;
    Ok(euler_maclaurin(s, tolerance, false).value)
}

/// `zeta'(s)` from the termwise-differentiated expansion.
pub fn zeta_prime(s: Complex64) -> Result<Complex64> {
    Ok(zeta_and_derivative(s)?.1)
}

/// `(zeta(s), zeta'(s))` sharing one pass over the terms.
pub fn zeta_and_derivative(s: Complex64) -> Result<(Complex64, Complex64)> {
    check_domain(s)?;
    let e = euler_maclaurin(s, DEFAULT_TOLERANCE, true);
    Ok((e.value, e.derivative))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn classical_values() {
        assert!((zeta(c(2.0, 0.0)).unwrap().re - PI * PI / 6.0).abs() < 1e-14);
        assert!((zeta(c(0.0, 0.0)).unwrap() - c(-0.5, 0.0)).norm() < 1e-14);
        assert!((zeta(c(-1.0, 0.0)).unwrap() - c(-1.0 / 12.0, 0.0)).norm() < 1e-13);
        // trivial zero; only cancellation error remains
        assert!(zeta(c(-2.0, 0.0)).unwrap().norm() < 1e-10);
        assert!(zeta_prime(c(-2.0, 0.0)).unwrap().norm() > 1e-3);
    }

    #[test]
    fn rejects_pole_and_range() {
        assert!(matches!(zeta(c(1.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(zeta(c(0.5, 2e5)), Err(Error::Range(_))));
        assert!(matches!(zeta(c(-30.0, 0.0)), Err(Error::Range(_))));
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for s in [c(0.5, 14.0), c(2.0, 3.0), c(-0.5, 40.0), c(0.7, 1000.0)] {
            let d = zeta_prime(s).unwrap();
            let fd = (zeta(s + h).unwrap() - zeta(s - h).unwrap()) / (2.0 * h);
            assert!((d - fd).norm() <= 1e-6 * d.norm(), "{s}: {d} vs {fd}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for s in [c(0.5, 14.0), c(-0.7, 3.0), c(1.3, 250.0)] {
            let a = zeta(s).unwrap();
            let b = zeta(s.conj()).unwrap();
            assert!((a.conj() - b).norm() <= 1e-13 * a.norm());
        }
    }
}
