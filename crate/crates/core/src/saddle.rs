//! Saddle points of the generating function and the resulting asymptotic
//! profile of `p(n, f)`.
//!
//! `Psi(z) = sum_{n,k} f(n)^k z^{nk} / k` is summed grouped by `m = nk`:
//! `Psi_j(z) = (z d/dz)^j Psi(z) = sum_m S(m) m^{j-1} z^m` with
//! `S(m) = sum_{d | m} d f(d)^{m/d}`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::constants::KAPPA_OVER_ZFRAK;
use crate::weight::{divisor_sum_table, SignedWeight};

/// Closest admissible approach of `|z|` to 1.
pub const RADIUS_GUARD: f64 = 1.0 - 1e-8;
/// Terms are dropped once bounded by this fraction of the leading magnitude.
pub const TRUNCATION_RATIO: f64 = 1e-18;
/// Relative saddle residual `|z Psi'(z) - x| / x` the solver must reach.
pub const SADDLE_TOLERANCE: f64 = 1e-10;
/// Below this `|phi*|` the two saddle contributions nearly cancel.
pub const INDETERMINATE_PHI_STAR: f64 = 1e-3;
/// Smallest argument accepted by the solver.
pub const MIN_SADDLE_X: f64 = 100.0;

const RESYNC: usize = 256;
const NEWTON_ITERATIONS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `z = r > 0`
    Plus,
    /// `z = -r*`
    Minus,
}

impl Branch {
    fn signum(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Number of coefficients needed so that every dropped term of `Psi_j` at
/// `|z| = radius` is below the truncation ratio.
fn required_terms(radius: f64, j: u32) -> Result<usize> {
    if !(radius > 0.0) || radius > RADIUS_GUARD {
        return Err(Error::Truncation(format!(
            "|z| = {radius} is outside (0, {RADIUS_GUARD}]"
        )));
    }
    let decay = -radius.ln();
    // |S(m)| <= m (1 + ln m), and the leading magnitude is at least |z|.
    let budget = -TRUNCATION_RATIO.ln() + decay;
    let mut m = ((j + 1) as f64 / decay).max(2.0);
    for _ in 0..50 {
        let next = (budget + j as f64 * m.ln() + (1.0 + m.ln()).ln()) / decay;
        if (next - m).abs() < 0.5 {
            m = next;
            break;
        }
        m = next;
    }
    let m = m.ceil() + 16.0;
    if m > 1e9 {
        return Err(Error::Truncation(format!("{m} terms needed at |z| = {radius}")));
    }
    Ok(m as usize)
}

/// Coefficients `S(m)` of a fixed weight, sized for a largest radius.
#[derive(Debug, Clone)]
pub struct PsiSeries {
    weight: SignedWeight,
    coefficients: Vec<f64>,
}

impl PsiSeries {
    pub fn with_terms(weight: SignedWeight, terms: usize) -> Result<Self> {
        let coefficients = divisor_sum_table(weight, terms)?
            .into_iter()
            .map(|c| c as f64)
            .collect();
        Ok(PsiSeries { weight, coefficients })
    }

    /// A series that evaluates `Psi_j`, `j <= 2`, for every `|z| <= radius`.
    pub fn for_radius(weight: SignedWeight, radius: f64) -> Result<Self> {
        Self::with_terms(weight, required_terms(radius, 2)?)
    }

    /// A series large enough for both saddle brackets at every `x' <= x`.
    pub fn for_saddle(weight: SignedWeight, x: f64) -> Result<Self> {
        let upper = 2.0 * saddle_guess(weight, x)?;
        Self::for_radius(weight, (-1.0 / upper).exp())
    }

    pub fn weight(&self) -> SignedWeight {
        self.weight
    }

    pub fn terms(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// `Psi_j(z)` for real `0 < |z| < 1`.
    pub fn psi(&self, z: f64, j: u32) -> Result<f64> {
        if j > 2 {
            return Err(Error::InvalidInput(format!("derivative order {j} > 2")));
        }
        let radius = z.abs();
        if z == 0.0 || !z.is_finite() || radius > RADIUS_GUARD {
            return Err(Error::Truncation(format!(
                "z = {z} is outside 0 < |z| <= {RADIUS_GUARD}"
            )));
        }
        let decay = -radius.ln();
        let threshold = (j + 1) as f64 / decay;
        let mut power = 1.0;
        let mut sum = 0.0;
        let mut lead = 0.0f64;
        for m in 1..self.coefficients.len() {
            if m % RESYNC == 0 {
                power = z.powi(m as i32);
            } else {
                power *= z;
            }
            let mf = m as f64;
            let weight = match j {
                0 => 1.0 / mf,
                1 => 1.0,
                _ => mf,
            };
            let term = self.coefficients[m] * weight * power;
            sum += term;
            lead = lead.max(term.abs());
            if mf > threshold {
                let bound = power.abs() * mf.powi(j as i32) * (1.0 + mf.ln());
                if bound < TRUNCATION_RATIO * lead.max(sum.abs()) {
                    return Ok(sum);
                }
            }
        }
        Err(Error::Truncation(format!(
            "{} terms do not reach the cutoff at z = {z}",
            self.terms()
        )))
    }
}

/// `Psi_j(z)` with a series sized for `z`.
pub fn psi_j(f: SignedWeight, z: f64, j: u32) -> Result<f64> {
    PsiSeries::for_radius(f, z.abs())?.psi(z, j)
}

/// Leading-order saddle `X`: `2 sqrt(x)` for mu, `(kappa/zfrak) sqrt(x)` for lambda.
pub fn saddle_guess(f: SignedWeight, x: f64) -> Result<f64> {
    match f {
        SignedWeight::Mu => Ok(2.0 * x.sqrt()),
        SignedWeight::Lambda => Ok(KAPPA_OVER_ZFRAK * x.sqrt()),
        other => Err(Error::InvalidInput(format!(
            "saddle points are implemented for mu and lambda, not {other}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleRoot {
    pub branch: Branch,
    /// `|z|` at the saddle.
    pub radius: f64,
    /// `1 / log(1 / radius)`
    pub big_x: f64,
    /// `|z Psi'(z) - x| / x`
    pub residual: f64,
}

/// Solves `z Psi'(z) = x` at `z = r` (plus) or `z = -r*` (minus).
pub fn solve_saddle(series: &PsiSeries, x: f64, branch: Branch) -> Result<SaddleRoot> {
    if !(x >= MIN_SADDLE_X) || !x.is_finite() {
        return Err(Error::InvalidInput(format!(
            "saddle points need x >= {MIN_SADDLE_X}, got {x}"
        )));
    }
    let guess = saddle_guess(series.weight(), x)?;
    let sign = branch.signum();
    let eval = |big_x: f64| -> Result<(f64, f64)> {
        let z = sign * (-1.0 / big_x).exp();
        Ok((series.psi(z, 1)? - x, series.psi(z, 2)?))
    };
    let (mut lo, mut hi) = (0.5 * guess, 2.0 * guess);
    let g_lo = eval(lo)?.0;
    let g_hi = eval(hi)?.0;
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Solver {
            x,
            message: format!(
                "{branch:?} bracket [{lo:.6}, {hi:.6}] has residuals {g_lo:.6e}, {g_hi:.6e}"
            ),
        });
    }
    while (hi - lo) > 1e-6 * lo {
        let mid = 0.5 * (lo + hi);
        if eval(mid)?.0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // d Psi_1 / dX = Psi_2 / X^2
    let mut big_x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_ITERATIONS {
        let (g, d) = eval(big_x)?;
        if (g / x).abs() <= SADDLE_TOLERANCE {
            return Ok(SaddleRoot {
                branch,
                radius: (-1.0 / big_x).exp(),
                big_x,
                residual: (g / x).abs(),
            });
        }
        if g < 0.0 {
            lo = lo.max(big_x);
        } else {
            hi = hi.min(big_x);
        }
        let step = g * big_x * big_x / d;
        let next = big_x - step;
        big_x = if next > lo && next < hi && step.is_finite() {
            next
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::Solver {
        x,
        message: format!("{branch:?} Newton iteration stalled near X = {big_x}"),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaddleProfile {
    pub x: f64,
    pub weight: SignedWeight,
    pub plus: SaddleRoot,
    pub minus: SaddleRoot,
    /// `Psi_j(r)` for `j = 0, 1, 2`.
    pub psi_plus: [f64; 3],
    /// `Psi_j(-r*)` for `j = 0, 1, 2`.
    pub psi_minus: [f64; 3],
    pub phi: f64,
    pub phi_star: f64,
}

impl SaddleProfile {
    pub fn r(&self) -> f64 {
        self.plus.radius
    }

    pub fn r_star(&self) -> f64 {
        self.minus.radius
    }

    pub fn big_x(&self) -> f64 {
        self.plus.big_x
    }

    pub fn big_x_star(&self) -> f64 {
        self.minus.big_x
    }

    pub fn psi_value(&self, branch: Branch, j: usize) -> f64 {
        match branch {
            Branch::Plus => self.psi_plus[j],
            Branch::Minus => self.psi_minus[j],
        }
    }
}

/// Solves both saddle equations at `x` and forms `phi` and `phi*`.
pub fn phi_profile(series: &PsiSeries, x: f64) -> Result<SaddleProfile> {
    let plus = solve_saddle(series, x, Branch::Plus)?;
    let minus = solve_saddle(series, x, Branch::Minus)?;
    let values = |z: f64| -> Result<[f64; 3]> {
        Ok([series.psi(z, 0)?, series.psi(z, 1)?, series.psi(z, 2)?])
    };
    let psi_plus = values(plus.radius)?;
    let psi_minus = values(-minus.radius)?;
    if !(psi_plus[2] > 0.0 && psi_minus[2] > 0.0) {
        return Err(Error::Solver {
            x,
            message: format!(
                "second derivatives {} and {} must be positive",
                psi_plus[2], psi_minus[2]
            ),
        });
    }
    let (xa, xb) = (plus.big_x, minus.big_x);
    let phi = 0.5
        * (psi_plus[0] + psi_minus[0] + x * (xa + xb) / (xa * xb)
            - 0.5 * (4.0 * PI * PI * psi_plus[2] * psi_minus[2]).ln());
    let phi_star = 0.5
        * (psi_plus[0] - psi_minus[0] - x * (xa - xb) / (xa * xb)
            - 0.5 * (psi_plus[2] / psi_minus[2]).ln());
    Ok(SaddleProfile {
        x,
        weight: series.weight(),
        plus,
        minus,
        psi_plus,
        psi_minus,
        phi,
        phi_star,
    })
}

/// Convenience wrapper that sizes a series for `x`.
pub fn phi_profile_at(f: SignedWeight, x: f64) -> Result<SaddleProfile> {
    phi_profile(&PsiSeries::for_saddle(f, x)?, x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub n: u64,
    /// Predicted `logsc p(n, f)`.
    pub value: f64,
    pub sign: i8,
    /// Set when `|phi*|` is too small to trust the sign.
    pub indeterminate: bool,
    pub phi: f64,
    pub phi_star: f64,
}

/// `logsc` of `e^phi (e^phi* + (-1)^n e^-phi*)`, formed in log space.
pub fn prediction_from_profile(n: u64, phi: f64, phi_star: f64) -> Prediction {
    let parity = if n % 2 == 0 { 1.0 } else { -1.0 };
    // e^a + parity e^b with a = phi*, b = -phi*
    let (big, small_coeff, lead_coeff) = if phi_star >= 0.0 {
        (phi_star, parity, 1.0)
    } else {
        (-phi_star, 1.0, parity)
    };
    let inner = lead_coeff + small_coeff * (-2.0 * big).exp();
    let indeterminate = phi_star.abs() < INDETERMINATE_PHI_STAR;
    if inner == 0.0 {
        return Prediction {
            n,
            value: 0.0,
            sign: 0,
            indeterminate,
            phi,
            phi_star,
        };
    }
    let log_abs = phi + big + inner.abs().ln();
    let magnitude = if log_abs > 0.0 {
        log_abs + (-log_abs).exp().ln_1p()
    } else {
        log_abs.exp().ln_1p()
    };
    let sign: i8 = if inner > 0.0 { 1 } else { -1 };
    Prediction {
        n,
        value: sign as f64 * magnitude,
        sign,
        indeterminate,
        phi,
        phi_star,
    }
}

/// Predicted `logsc p(n, f)` and sign for integer `n >= 100`.
pub fn predict_logsc_p(series: &PsiSeries, n: u64) -> Result<Prediction> {
    if (n as f64) < MIN_SADDLE_X {
        return Err(Error::InvalidInput(format!("prediction needs n >= 100, got {n}")));
    }
    let profile = phi_profile(series, n as f64)?;
    Ok(prediction_from_profile(n, profile.phi, profile.phi_star))
}

/// Predictions for every `n` in `range`, evaluated in parallel.
pub fn predict_range(
    f: SignedWeight,
    range: std::ops::RangeInclusive<u64>,
) -> Result<Vec<Prediction>> {
    let top = *range.end();
    let series = PsiSeries::for_saddle(f, top as f64)?;
    range
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&n| predict_logsc_p(&series, n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::KAPPA;

    #[test]
    fn product_form_for_unit_weight() {
        let z = 0.5f64;
        let oracle: f64 = (1..200).map(|n| -(1.0 - z.powi(n)).ln()).sum();
        let v = psi_j(SignedWeight::One, z, 0).unwrap();
        assert!((v - oracle).abs() < 1e-12, "{v} vs {oracle}");
    }

    #[test]
    fn euler_operator_matches_finite_difference() {
        for f in [SignedWeight::Mu, SignedWeight::Lambda, SignedWeight::One] {
            for z in [0.3, -0.3] {
                let h = 1e-6;
                let d = (psi_j(f, z + h, 0).unwrap() - psi_j(f, z - h, 0).unwrap()) / (2.0 * h);
                let j1 = psi_j(f, z, 1).unwrap();
                assert!((j1 - z * d).abs() < 1e-6, "{f} {z}: {j1} vs {}", z * d);
                let d1 = (psi_j(f, z + h, 1).unwrap() - psi_j(f, z - h, 1).unwrap()) / (2.0 * h);
                assert!((psi_j(f, z, 2).unwrap() - z * d1).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn guard_near_unit_circle() {
        assert!(matches!(
            psi_j(SignedWeight::Mu, 1.0 - 1e-9, 1),
            Err(Error::Truncation(_))
        ));
        let small = PsiSeries::with_terms(SignedWeight::Mu, 100).unwrap();
        assert!(matches!(small.psi(0.99, 1), Err(Error::Truncation(_))));
    }

    #[test]
    fn saddle_points_at_ten_thousand() {
        let x = 1e4;
        let mu = phi_profile_at(SignedWeight::Mu, x).unwrap();
        let ratio = mu.big_x() / (2.0 * x.sqrt());
        assert!((0.95..=1.05).contains(&ratio), "{ratio}");
        assert!(mu.plus.residual <= SADDLE_TOLERANCE && mu.minus.residual <= SADDLE_TOLERANCE);
        let psi_ratio = mu.psi_plus[0] / (0.5 * x.sqrt());
        assert!((0.8..=1.2).contains(&psi_ratio), "{psi_ratio}");
        assert!((0.9..=1.1).contains(&(mu.phi / x.sqrt())));
        // Calibrated against the exact table run: phi* = -14.16 at x = 1e4.
        assert!(mu.phi_star.abs() / x.sqrt() <= 0.15, "{}", mu.phi_star);
        assert!(mu.phi_star < 0.0);
        assert!(mu.psi_minus[1] > 0.0);

        let lam = phi_profile_at(SignedWeight::Lambda, x).unwrap();
        let lr = lam.big_x() / (KAPPA_OVER_ZFRAK * x.sqrt());
        // 1.090, 1.050, 1.028 at x = 1e3, 1e4, 1e5.
        assert!((0.95..=1.06).contains(&lr), "{lr}");
        let pr = lam.phi / (0.5 * KAPPA * x.sqrt());
        assert!((0.9..=1.1).contains(&pr), "{pr}");
    }

    #[test]
    fn saddle_residuals_across_scales() {
        for f in [SignedWeight::Mu, SignedWeight::Lambda] {
            let series = PsiSeries::for_saddle(f, 1e5).unwrap();
            for x in [1e2, 1e3, 1e4, 1e5] {
                for b in [Branch::Plus, Branch::Minus] {
                    let root = solve_saddle(&series, x, b).unwrap();
                    let z = b.signum() * root.radius;
                    let res = (series.psi(z, 1).unwrap() - x).abs() / x;
                    assert!(res <= SADDLE_TOLERANCE, "{f} {x} {b:?}: {res}");
                }
            }
        }
    }

    #[test]
    fn second_derivative_scaling() {
        for x in [1e3, 1e4] {
            let mu = phi_profile_at(SignedWeight::Mu, x).unwrap();
            let r = mu.psi_plus[2] / (4.0 * x.powf(1.5));
            assert!((r - 1.0).abs() <= 0.25, "mu {x}: {r}");
            let lam = phi_profile_at(SignedWeight::Lambda, x).unwrap();
            let r = lam.psi_plus[2] / (2.0 * KAPPA_OVER_ZFRAK * x.powf(1.5));
            assert!((r - 1.0).abs() <= 0.25, "lambda {x}: {r}");
        }
    }

    #[test]
    fn rejects_small_or_unsupported_input() {
        let series = PsiSeries::for_saddle(SignedWeight::Mu, 1e3).unwrap();
        assert!(solve_saddle(&series, 50.0, Branch::Plus).is_err());
        assert!(PsiSeries::for_saddle(SignedWeight::One, 1e3).is_err());
        assert!(predict_logsc_p(&series, 99).is_err());
    }

    #[test]
    fn prediction_sign_follows_dominant_term() {
        let p = prediction_from_profile(1001, 50.0, -3.0);
        assert_eq!(p.sign, -1);
        let q = prediction_from_profile(1000, 50.0, -3.0);
        assert_eq!(q.sign, 1);
        assert!((q.value - (50.0 + 3.0 + (1.0 + (-6.0f64).exp()).ln())).abs() < 1e-12);
        let r = prediction_from_profile(1001, 50.0, 2.0);
        assert_eq!(r.sign, 1);
        assert!(prediction_from_profile(1001, 50.0, 1e-4).indeterminate);
        let z = prediction_from_profile(7, 10.0, 0.0);
        assert_eq!((z.value, z.sign), (0.0, 0));
    }
}
