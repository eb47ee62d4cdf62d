//! Ordinates `gamma > 0` of critical-line zeros `1/2 + i gamma` of zeta.
//!
//! Tables are ingested from text files (one ordinate per line) rather than
//! computed here; a table of the first hundred ordinates is built in.

use std::io::BufRead;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::zeta_and_derivative;

/// Significant digits every tabulated ordinate must carry.
pub const MIN_SIGNIFICANT_DIGITS: usize = 9;

const REFINE_MAX_ITERATIONS: usize = 50;
const REFINE_RESIDUAL: f64 = 1e-10;

/// Constants of the explicit zero-counting window.
pub const TRUDGIAN_C1: f64 = 0.111;
pub const TRUDGIAN_C2: f64 = 0.275;
pub const TRUDGIAN_C3: f64 = 2.45;
pub const TRUDGIAN_C4: f64 = 0.2;

/// First 100 ordinates, rounded to 9 decimals.
const BUILTIN: [f64; 100] = [
    14.134725142, 21.022039639, 25.010857580, 30.424876126,
    32.935061588, 37.586178159, 40.918719012, 43.327073281,
    48.005150881, 49.773832478, 52.970321478, 56.446247697,
    59.347044003, 60.831778525, 65.112544048, 67.079810529,
    69.546401711, 72.067157674, 75.704690699, 77.144840069,
    79.337375020, 82.910380854, 84.735492981, 87.425274613,
    88.809111208, 92.491899271, 94.651344041, 95.870634228,
    98.831194218, 101.317851006, 103.725538040, 105.446623052,
    107.168611184, 111.029535543, 111.874659177, 114.320220915,
    116.226680321, 118.790782866, 121.370125002, 122.946829294,
    124.256818554, 127.516683880, 129.578704200, 131.087688531,
    133.497737203, 134.756509753, 138.116042055, 139.736208952,
    141.123707404, 143.111845808, 146.000982487, 147.422765343,
    150.053520421, 150.925257612, 153.024693811, 156.112909294,
    157.597591818, 158.849988171, 161.188964138, 163.030709687,
    165.537069188, 167.184439978, 169.094515416, 169.911976479,
    173.411536520, 174.754191523, 176.441434298, 178.377407776,
    179.916484020, 182.207078484, 184.874467848, 185.598783678,
    187.228922584, 189.416158656, 192.026656361, 193.079726604,
    195.265396680, 196.876481841, 198.015309676, 201.264751944,
    202.493594514, 204.189671803, 205.394697202, 207.906258888,
    209.576509717, 211.690862595, 213.347919360, 214.547044783,
    216.169538508, 219.067596349, 220.714918839, 221.430705555,
    224.007000255, 224.983324670, 227.421444280, 229.337413306,
    231.250188700, 231.987235253, 233.693404179, 236.524229666,
];

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    decimals: u32,
    refined: Vec<bool>,
}

impl ZeroTable {
    /// Builds a table from ascending ordinates.
    pub fn from_ordinates(ordinates: Vec<f64>, decimals: u32) -> Result<Self> {
        for (i, w) in ordinates.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(Error::Parse {
                    line: i + 2,
                    message: format!("ordinates not strictly ascending ({} then {})", w[0], w[1]),
                });
            }
        }
        if let Some(&first) = ordinates.first() {
            if first <= 0.0 {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("ordinate {first} is not positive"),
                });
            }
        }
        let refined = vec![false; ordinates.len()];
        Ok(ZeroTable {
            ordinates,
            decimals,
            refined,
        })
    }

    /// The first hundred ordinates.
    pub fn builtin() -> Self {
        ZeroTable::from_ordinates(BUILTIN.to_vec(), 9).expect("built-in table is ascending")
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    /// Decimal places common to every entry.
    pub fn decimals(&self) -> u32 {
        self.decimals
    }

    /// Absolute precision implied by [`ZeroTable::decimals`].
    pub fn precision(&self) -> f64 {
        10f64.powi(-(self.decimals as i32))
    }

    pub fn is_refined(&self, i: usize) -> bool {
        self.refined[i]
    }

    /// Height up to which the table is complete (its largest ordinate).
    pub fn coverage(&self) -> f64 {
        self.ordinates.last().copied().unwrap_or(0.0)
    }

    pub fn ensure_covers(&self, height: f64) -> Result<()> {
        if height > self.coverage() {
            return Err(Error::Coverage {
                requested: height,
                coverage: self.coverage(),
            });
        }
        Ok(())
    }

    /// Ordinates in `(0, height]`.
    pub fn up_to(&self, height: f64) -> &[f64] {
        let k = self.ordinates.partition_point(|&g| g <= height);
        &self.ordinates[..k]
    }

    /// Ordinates strictly below `height`.
    pub fn below(&self, height: f64) -> &[f64] {
        let k = self.ordinates.partition_point(|&g| g < height);
        &self.ordinates[..k]
    }

    /// Newton-refines every entry (in parallel) and returns the new table.
    pub fn refined(&self) -> Result<ZeroTable> {
        self.refined_prefix(self.len())
    }

    /// Refines the first `count` entries, copying the rest.
    pub fn refined_prefix(&self, count: usize) -> Result<ZeroTable> {
        let count = count.min(self.len());
        let head: Vec<f64> = self.ordinates[..count]
            .par_iter()
            .map(|&g| refine_zero(g))
            .collect::<Result<_>>()?;
        let mut ordinates = head;
        ordinates.extend_from_slice(&self.ordinates[count..]);
        let mut refined = self.refined.clone();
        refined[..count].iter_mut().for_each(|r| *r = true);
        let out = ZeroTable::from_ordinates(ordinates, self.decimals)?;
        Ok(ZeroTable { refined, ..out })
    }
}

fn significant_digits(token: &str) -> usize {
    token
        .chars()
        .filter(|c| c.is_ascii_digit())
        .skip_while(|&c| c == '0')
        .count()
}

/// Parses one ordinate per line; blank lines and `#` comments are skipped.
pub fn load_zeros<R: BufRead>(source: R) -> Result<ZeroTable> {
    let mut ordinates = Vec::new();
    let mut decimals = u32::MAX;
    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let token = line.trim();
        if token.is_empty() || token.starts_with('#') {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("'{token}' is not a decimal number"),
        })?;
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!("ordinate {token} must be positive"),
            });
        }
        if significant_digits(token) < MIN_SIGNIFICANT_DIGITS {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "'{token}' has fewer than {MIN_SIGNIFICANT_DIGITS} significant digits"
                ),
            });
        }
        if let Some(&prev) = ordinates.last() {
            if value <= prev {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("{token} does not exceed the previous ordinate {prev}"),
                });
            }
        }
        let places = token.split_once('.').map_or(0, |(_, frac)| frac.len()) as u32;
        decimals = decimals.min(places);
        ordinates.push(value);
    }
    if ordinates.is_empty() {
        decimals = 0;
    }
    ZeroTable::from_ordinates(ordinates, decimals)
}

/// Newton's method on `t -> zeta(1/2 + i t)` from a nearby approximation.
pub fn refine_zero(gamma0: f64) -> Result<f64> {
    let mut t = gamma0;
    for _ in 0..REFINE_MAX_ITERATIONS {
        let (z, dz) = zeta_and_derivative(Complex64::new(0.5, t))?;
        // d/dt zeta(1/2 + it) = i zeta'(1/2 + it)
        let step = (z / (Complex64::i() * dz)).re;
        if !step.is_finite() {
            break;
        }
        t -= step;
        if step.abs() <= 1e-14 * t.abs().max(1.0) {
            let (z, dz) = zeta_and_derivative(Complex64::new(0.5, t))?;
            // High up the line one ulp of t, and the rounding of the phases
            // t log n, already move zeta by more than the nominal residual.
            let ulp = f64::EPSILON * t.abs();
            let floor = 4.0 * ulp * (dz.norm() + t.abs().max(2.0).ln());
            if z.norm() < REFINE_RESIDUAL.max(floor) {
                return Ok(t);
            }
        }
    }
    Err(Error::Refinement {
        start: gamma0,
        iterations: REFINE_MAX_ITERATIONS,
    })
}

/// `N(T)`: tabulated ordinates in `(0, T]`.
pub fn count_zeros(table: &ZeroTable, height: f64) -> Result<usize> {
    table.ensure_covers(height)?;
    Ok(table.up_to(height).len())
}

/// Main term `(T / 2 pi) log(T / 2 pi e) + 7/8` of `N(T)`.
pub fn riemann_von_mangoldt(height: f64) -> f64 {
    let x = height / std::f64::consts::TAU;
    x * (x.ln() - 1.0) + 0.875
}

/// Half-width of the explicit window for `N(T)`.
pub fn trudgian_radius(height: f64) -> f64 {
    TRUDGIAN_C1 * height.ln()
        + TRUDGIAN_C2 * height.ln().ln()
        + TRUDGIAN_C3
        + TRUDGIAN_C4 / height
}

/// `(lower, upper)` bounds that must contain `N(T)` for `T >= e`.
pub fn trudgian_window(height: f64) -> Result<(f64, f64)> {
    if !(height >= std::f64::consts::E) {
        return Err(Error::Domain(format!("counting window needs T >= e, got {height}")));
    }
    let m = riemann_von_mangoldt(height);
    let r = trudgian_radius(height);
    Ok((m - r, m + r))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicReport {
    pub k: u32,
    /// `N(2^{k+1}) - N(2^k)`
    pub actual: usize,
    /// `(k + 1) 2^k`
    pub bound: u64,
    pub pass: bool,
}

/// Compares the zero count in `(2^k, 2^{k+1}]` with `(k + 1) 2^k`.
pub fn dyadic_count_check(table: &ZeroTable, k: u32) -> Result<DyadicReport> {
    if k < 5 {
        return Err(Error::Domain(format!("dyadic bound is stated for k >= 5, got {k}")));
    }
    if k > 40 {
        return Err(Error::Range(format!("k = {k} is beyond any tabulated height")));
    }
    let lo = (1u64 << k) as f64;
    let hi = 2.0 * lo;
    let actual = count_zeros(table, hi)? - count_zeros(table, lo)?;
    let bound = u64::from(k + 1) << k;
    Ok(DyadicReport {
        k,
        actual,
        bound,
        pass: actual as u64 <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_and_validates() {
        let t = load_zeros("# comment\n14.134725142\n21.022039639\n".as_bytes()).unwrap();
        assert_eq!(t.len(), 2);
        assert!((t.ordinates()[0] - 14.13).abs() < 0.01);
        assert!((t.ordinates()[1] - 21.02).abs() < 0.01);
        assert_eq!(t.decimals(), 9);

        assert!(load_zeros("".as_bytes()).unwrap().is_empty());
        match load_zeros("21.022039639\n14.134725142\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            load_zeros("14.134725142\nabc\n".as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(load_zeros("14.13\n".as_bytes()).is_err());
        assert!(load_zeros("-14.134725142\n".as_bytes()).is_err());
    }

    #[test]
    fn builtin_table() {
        let t = ZeroTable::builtin();
        assert_eq!(t.len(), 100);
        assert!((t.ordinates()[0] - 14.1347).abs() < 1e-4);
        assert_eq!(count_zeros(&t, 15.0).unwrap(), 1);
        assert_eq!(count_zeros(&t, 14.0).unwrap(), 0);
        assert_eq!(count_zeros(&t, 100.0).unwrap(), 29);
        assert!(matches!(count_zeros(&t, 300.0), Err(Error::Coverage { .. })));
    }

    #[test]
    fn refinement() {
        let g1 = refine_zero(14.13).unwrap();
        assert!((g1 - 14.134_725_141_734_693).abs() < 1e-9);
        let again = refine_zero(g1).unwrap();
        assert!((again - g1).abs() < 1e-12);
        let g2 = refine_zero(21.02).unwrap();
        assert!((g2 - 21.022_039_638_771_555).abs() < 1e-9);
        let z = crate::special::zeta(Complex64::new(0.5, g2)).unwrap();
        assert!(z.norm() < REFINE_RESIDUAL);
    }

    #[test]
    fn refinement_respects_table_precision() {
        let t = ZeroTable::builtin();
        let r = t.refined_prefix(20).unwrap();
        for i in 0..100 {
            assert!((r.ordinates()[i] - t.ordinates()[i]).abs() <= t.precision());
            assert_eq!(r.is_refined(i), i < 20);
        }
    }

    #[test]
    fn windows_contain_counts() {
        let t = ZeroTable::builtin();
        for h in [30.0, 50.0, 100.0, 150.0, 200.0, 236.0] {
            let (lo, hi) = trudgian_window(h).unwrap();
            let n = count_zeros(&t, h).unwrap() as f64;
            assert!(lo <= n && n <= hi, "T = {h}: {lo} <= {n} <= {hi}");
        }
        assert!(trudgian_window(2.0).is_err());
        let w = |h: f64| {
            let (a, b) = trudgian_window(h).unwrap();
            b - a
        };
        assert!(w(1e4) > w(1e2));
        assert!(w(1e4) < 10f64.powi(4).ln().powi(2));
    }

    #[test]
    fn dyadic_needs_valid_k_and_coverage() {
        let t = ZeroTable::builtin();
        let r = dyadic_count_check(&t, 5).unwrap();
        assert_eq!(r.bound, 192);
        assert!(r.pass);
        assert!(matches!(dyadic_count_check(&t, 4), Err(Error::Domain(_))));
        assert!(matches!(dyadic_count_check(&t, 7), Err(Error::Coverage { .. })));
    }
}
