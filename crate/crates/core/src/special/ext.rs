//! Numbers whose magnitude lies far outside the `f64` exponent range.
//!
//! [`ExtReal`] keeps a decimal significand in `[1, 10)` with a separate
//! `i64` exponent; [`LogPolarComplex`] stores `log |z|` and `arg z`, so
//! products of factors like `Gamma(1/2 + 32768 i)` never underflow.

use std::cmp::Ordering;
use std::f64::consts::{LN_10, PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};

// Cody-Waite split of ln 10; the high part has 32 trailing zero bits so
// q * LN10_HI is exact for any realistic exponent q.
const LN10_HI: f64 = 2.302_583_694_458_008;
const LN10_LO: f64 = 1.398_536_037_871_518e-6;

/// Differences in decimal exponent beyond which the smaller summand
/// cannot affect a double significand.
const NEGLIGIBLE_SHIFT: i64 = 40;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtReal {
    sign: i8,
    significand: f64,
    exponent: i64,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal {
        sign: 0,
        significand: 0.0,
        exponent: 0,
    };

    pub const ONE: ExtReal = ExtReal {
        sign: 1,
        significand: 1.0,
        exponent: 0,
    };

    /// Builds `sig * 10^exp`, normalising the significand.
    pub fn new(sig: f64, exp: i64) -> ExtReal {
        if sig == 0.0 || !sig.is_finite() {
            return ExtReal::ZERO;
        }
        let sign = if sig < 0.0 { -1 } else { 1 };
        let mut m = sig.abs();
        let shift = m.log10().floor() as i64;
        m /= 10f64.powi(shift as i32);
        let mut e = exp + shift;
        // log10 can be off by one ulp at exact powers of ten.
        while m >= 10.0 {
            m /= 10.0;
            e += 1;
        }
        while m < 1.0 {
            m *= 10.0;
            e -= 1;
        }
        ExtReal {
            sign,
            significand: m,
            exponent: e,
        }
    }

    pub fn from_f64(x: f64) -> ExtReal {
        ExtReal::new(x, 0)
    }

    /// `sign * exp(ln_mag)`; `ln_mag = -inf` gives zero.
    pub fn from_ln(ln_mag: f64, sign: i8) -> ExtReal {
        if sign == 0 || ln_mag == f64::NEG_INFINITY {
            return ExtReal::ZERO;
        }
        let q = (ln_mag / LN_10).floor();
        let r = (ln_mag - q * LN10_HI) - q * LN10_LO;
        ExtReal::new(f64::from(sign) * r.exp(), q as i64)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn significand(&self) -> f64 {
        self.significand * f64::from(self.sign)
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> ExtReal {
        ExtReal {
            sign: self.sign.abs(),
            ..self
        }
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn ln_abs(&self) -> f64 {
        if self.sign == 0 {
            return f64::NEG_INFINITY;
        }
        self.significand.ln() + self.exponent as f64 * LN_10
    }

    /// Base-10 log of the magnitude.
    pub fn log10_abs(&self) -> f64 {
        if self.sign == 0 {
            return f64::NEG_INFINITY;
        }
        self.significand.log10() + self.exponent as f64
    }

    /// Nearest `f64`, saturating to 0 or infinity.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let s = self.significand();
        if self.exponent > 308 {
            return s * f64::INFINITY;
        }
        if self.exponent < -340 {
            return s * 0.0;
        }
        if self.exponent < -300 {
            return s * 1e-300 * 10f64.powi((self.exponent + 300) as i32);
        }
        s * 10f64.powi(self.exponent as i32)
    }

    pub fn powi(self, k: i32) -> ExtReal {
        let mut acc = ExtReal::ONE;
        for _ in 0..k.unsigned_abs() {
            acc = acc * self;
        }
        if k < 0 {
            ExtReal::ONE / acc
        } else {
            acc
        }
    }
}

impl std::ops::Div for ExtReal {
    type Output = ExtReal;

    fn div(self, rhs: ExtReal) -> ExtReal {
        if rhs.sign == 0 {
            panic!("ExtReal division by zero");
        }
        if self.sign == 0 {
            return ExtReal::ZERO;
        }
        ExtReal::new(
            self.significand() / rhs.significand(),
            self.exponent - rhs.exponent,
        )
    }
}

impl Mul for ExtReal {
    type Output = ExtReal;

    fn mul(self, rhs: ExtReal) -> ExtReal {
        if self.sign == 0 || rhs.sign == 0 {
            return ExtReal::ZERO;
        }
        ExtReal::new(
            self.significand() * rhs.significand(),
            self.exponent + rhs.exponent,
        )
    }
}

impl Add for ExtReal {
    type Output = ExtReal;

    fn add(self, rhs: ExtReal) -> ExtReal {
        ext_sum(&[self, rhs])
    }
}

impl Neg for ExtReal {
    type Output = ExtReal;

    fn neg(self) -> ExtReal {
        ExtReal {
            sign: -self.sign,
            ..self
        }
    }
}

impl Sub for ExtReal {
    type Output = ExtReal;

    fn sub(self, rhs: ExtReal) -> ExtReal {
        self + (-rhs)
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.sign != other.sign {
            return self.sign.partial_cmp(&other.sign);
        }
        if self.sign == 0 {
            return Some(Ordering::Equal);
        }
        let mag = self
            .exponent
            .cmp(&other.exponent)
            .then(self.significand.total_cmp(&other.significand));
        Some(if self.sign > 0 { mag } else { mag.reverse() })
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sign == 0 {
            return f.write_str("0");
        }
        match f.precision() {
            Some(p) => write!(f, "{:.*}e{}", p, self.significand(), self.exponent),
            None => write!(f, "{}e{}", self.significand(), self.exponent),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    /// Accepts plain decimals and `<mantissa>e<exponent>` with any exponent.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("cannot parse '{s}' as a number"));
        let t = s.trim();
        let (mant, exp) = match t.find(['e', 'E']) {
            Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (t, 0),
        };
        let m: f64 = mant.parse().map_err(|_| bad())?;
        if !m.is_finite() {
            return Err(bad());
        }
        Ok(ExtReal::new(m, exp))
    }
}

/// Sums terms after shifting each to the largest exponent present.
pub fn ext_sum(terms: &[ExtReal]) -> ExtReal {
    let Some(top) = terms.iter().filter(|t| !t.is_zero()).map(|t| t.exponent).max() else {
        return ExtReal::ZERO;
    };
    let mut acc = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms.iter().filter(|t| !t.is_zero()) {
        let shift = top - t.exponent;
        if shift > NEGLIGIBLE_SHIFT {
            continue;
        }
        // Kahan summation keeps exactness for representable inputs.
        let y = t.significand() * 10f64.powi(-(shift as i32)) - comp;
        let s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    ExtReal::new(acc, top)
}

/// A complex number held as `exp(log_magnitude + i phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPolarComplex {
    pub log_magnitude: f64,
    pub phase: f64,
}

/// Reduces an angle to `(-pi, pi]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut r = theta % TAU;
    if r <= -PI {
        r += TAU;
    } else if r > PI {
        r -= TAU;
    }
    r
}

impl LogPolarComplex {
    pub const ZERO: LogPolarComplex = LogPolarComplex {
        log_magnitude: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_magnitude: f64, phase: f64) -> Self {
        LogPolarComplex {
            log_magnitude,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            return Self::ZERO;
        }
        LogPolarComplex {
            log_magnitude: z.norm().ln(),
            phase: z.arg(),
        }
    }

    /// `exp(w)` for complex `w` without forming the possibly tiny value.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    /// Plain complex value; underflows to zero when the magnitude is tiny.
    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_magnitude.exp(), self.phase)
    }

    /// `|z|` in extended form.
    pub fn magnitude(&self) -> ExtReal {
        ExtReal::from_ln(self.log_magnitude, if self.is_zero() { 0 } else { 1 })
    }

    pub fn recip(self) -> Self {
        Self::new(-self.log_magnitude, -self.phase)
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_magnitude, -self.phase)
    }

    /// Real part as an extended real.
    pub fn re_ext(&self) -> ExtReal {
        let c = self.phase.cos();
        ExtReal::from_ln(self.log_magnitude, 1) * ExtReal::from_f64(c)
    }

    /// Imaginary part as an extended real.
    pub fn im_ext(&self) -> ExtReal {
        let s = self.phase.sin();
        ExtReal::from_ln(self.log_magnitude, 1) * ExtReal::from_f64(s)
    }
}

impl Mul for LogPolarComplex {
    type Output = LogPolarComplex;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::new(
            self.log_magnitude + rhs.log_magnitude,
            self.phase + rhs.phase,
        )
    }
}

impl std::ops::Div for LogPolarComplex {
    type Output = LogPolarComplex;

    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

impl From<Complex64> for LogPolarComplex {
    fn from(z: Complex64) -> Self {
        Self::from_complex(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalisation_and_round_trip() {
        let x = ExtReal::new(1234.5, -3);
        assert_eq!(x.exponent(), 0);
        assert!((x.significand() - 1.2345).abs() < 1e-15);
        for v in [1.0, -0.001, 9.999999, 1e300, 5e-310, 10.0, 100.0] {
            let e = ExtReal::from_f64(v);
            assert!((e.to_f64() - v).abs() <= 1e-15 * v.abs());
        }
        assert!(ExtReal::from_f64(0.0).is_zero());
    }

    #[test]
    fn sums_far_below_underflow() {
        let a: ExtReal = "1e-17884".parse().unwrap();
        let b: ExtReal = "3e-17884".parse().unwrap();
        let s = ext_sum(&[a, b]);
        assert_eq!(s.exponent(), -17884);
        assert!((s.significand() - 4.0).abs() < 1e-15);

        let tiny: ExtReal = "1e-400".parse().unwrap();
        assert_eq!(ext_sum(&[tiny, tiny]).exponent(), -400);
        assert!((ext_sum(&[tiny, tiny]).significand() - 2.0).abs() < 1e-15);
        let s = ext_sum(&[ExtReal::ONE, tiny]);
        assert_eq!(s, ExtReal::ONE);
        assert!(ext_sum(&[]).is_zero());
    }

    #[test]
    fn ordering() {
        let vals: Vec<ExtReal> = ["-1e5", "-2", "-1e-900", "0", "3e-1000", "1", "2e50"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        for w in vals.windows(2) {
            assert!(w[0] < w[1], "{} < {}", w[0], w[1]);
        }
    }

    #[test]
    fn from_ln_accuracy() {
        for ln in [-700.0, -1.5, 0.0, 2.0, 600.0] {
            let e = ExtReal::from_ln(ln, 1);
            let direct = f64::exp(ln);
            assert!((e.to_f64() - direct).abs() <= 1e-13 * direct);
        }
        let e = ExtReal::from_ln(-41177.6, 1);
        assert!((e.log10_abs() - (-41177.6 / LN_10)).abs() < 1e-10);
    }

    #[test]
    fn log_polar_products() {
        let a = Complex64::new(0.3, -2.0);
        let b = Complex64::new(-1.5, 0.25);
        let p = LogPolarComplex::from(a) * LogPolarComplex::from(b);
        assert!((p.to_complex() - a * b).norm() < 1e-14);
        let q = LogPolarComplex::from(a) / LogPolarComplex::from(b);
        assert!((q.to_complex() - a / b).norm() < 1e-14);
        let big = LogPolarComplex::new(-51_000.0, 1.0);
        assert!(big.magnitude().exponent() < -22_000);
        assert_eq!(big.to_complex(), Complex64::new(0.0, 0.0));
        assert!((big.magnitude().ln_abs() + 51_000.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn magnitude_conversion(lm in -700.0f64..700.0, ph in -3.0f64..3.0) {
            let z = LogPolarComplex::new(lm, ph);
            let direct = lm.exp();
            let ext = z.magnitude().to_f64();
            prop_assert!((ext - direct).abs() <= 1e-12 * direct);
        }

        #[test]
        fn phases_wrap(lm1 in -5.0f64..5.0, p1 in -10.0f64..10.0, lm2 in -5.0f64..5.0, p2 in -10.0f64..10.0) {
            let z = LogPolarComplex::new(lm1, p1) * LogPolarComplex::new(lm2, p2);
            prop_assert!(z.phase > -PI && z.phase <= PI);
            prop_assert!((z.log_magnitude - (lm1 + lm2)).abs() < 1e-12);
        }

        #[test]
        fn sum_matches_f64(xs in proptest::collection::vec(-1e6f64..1e6, 1..20)) {
            let ext: Vec<_> = xs.iter().map(|&x| ExtReal::from_f64(x)).collect();
            let s = ext_sum(&ext).to_f64();
            let plain: f64 = xs.iter().sum();
            let scale: f64 = xs.iter().map(|x| x.abs()).sum();
            prop_assert!((s - plain).abs() <= 1e-12 * scale.max(1.0));
        }
    }
}
