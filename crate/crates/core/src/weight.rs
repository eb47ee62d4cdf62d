//! Arithmetic weights `f : N -> {-1, 0, 1}` and the sieves that tabulate them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest table a sieve will allocate (entries).
pub const SIEVE_LIMIT: usize = 1 << 28;

/// The weight applied to each part of a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SignedWeight {
    /// `f(n) = 1`: ordinary partitions.
    One,
    /// Möbius function.
    Mu,
    /// Liouville function.
    Lambda,
    /// `mu(n)^2`, the squarefree indicator.
    MuSq,
    /// Indicator of the primes.
    Primes,
}

impl SignedWeight {
    pub const ALL: [SignedWeight; 5] = [
        SignedWeight::One,
        SignedWeight::Mu,
        SignedWeight::Lambda,
        SignedWeight::MuSq,
        SignedWeight::Primes,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignedWeight::One => "one",
            SignedWeight::Mu => "mu",
            SignedWeight::Lambda => "lambda",
            SignedWeight::MuSq => "musq",
            SignedWeight::Primes => "primes",
        }
    }
}

impl fmt::Display for SignedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SignedWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "one" | "1" => Ok(SignedWeight::One),
            "mu" => Ok(SignedWeight::Mu),
            "lambda" => Ok(SignedWeight::Lambda),
            "musq" => Ok(SignedWeight::MuSq),
            "primes" => Ok(SignedWeight::Primes),
            other => Err(Error::InvalidInput(format!(
                "unknown weight '{other}' (expected one, mu, lambda, musq or primes)"
            ))),
        }
    }
}

/// Evaluates `f(n)` by trial division.
pub fn weight_value(f: SignedWeight, n: u64) -> Result<i8> {
    if n == 0 {
        return Err(Error::InvalidInput("weights are defined for n >= 1".into()));
    }
    if f == SignedWeight::One {
        return Ok(1);
    }
    // (number of distinct primes, total multiplicity, squarefree)
    let mut m = n;
    let mut distinct = 0u32;
    let mut total = 0u32;
    let mut squarefree = true;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            distinct += 1;
            total += e;
            squarefree &= e == 1;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        distinct += 1;
        total += 1;
    }
    let parity = |k: u32| if k % 2 == 0 { 1 } else { -1 };
    Ok(match f {
        SignedWeight::One => 1,
        SignedWeight::Mu if squarefree => parity(distinct),
        SignedWeight::Mu => 0,
        SignedWeight::Lambda => parity(total),
        SignedWeight::MuSq => i8::from(squarefree),
        SignedWeight::Primes => i8::from(total == 1),
    })
}

/// Smallest-prime-factor table for `0..=n`.
fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n + 1];
    let mut i = 2;
    while i <= n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
        i += 1;
    }
    spf
}

/// Tabulates `f(1..=n)`; entry `i` holds `f(i + 1)`.
pub fn sieve_weights(f: SignedWeight, n: usize) -> Result<Vec<i8>> {
    if n == 0 {
        return Err(Error::InvalidInput("sieve length must be >= 1".into()));
    }
    if n > SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "sieve of length {n} exceeds the limit {SIEVE_LIMIT}"
        )));
    }
    if f == SignedWeight::One {
        return Ok(vec![1; n]);
    }
    let spf = smallest_prime_factors(n);
    // w[k] = f(k); built from w[k / p] using the smallest prime factor p.
    let mut w = vec![0i8; n + 1];
    w[1] = if f == SignedWeight::Primes { 0 } else { 1 };
    for k in 2..=n {
        let p = spf[k] as usize;
        let rest = k / p;
        w[k] = match f {
            SignedWeight::One => 1,
            SignedWeight::Mu => {
                if rest % p == 0 {
                    0
                } else {
                    -w[rest]
                }
            }
            SignedWeight::Lambda => -w[rest],
            SignedWeight::MuSq => {
                if rest % p == 0 {
                    0
                } else {
                    w[rest]
                }
            }
            SignedWeight::Primes => i8::from(rest == 1),
        };
    }
    w.remove(0);
    Ok(w)
}

#[inline]
fn signed_power(v: i8, e: u64) -> i64 {
    match v {
        0 => 0,
        1 => 1,
        _ => {
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
    }
}

/// `S(m) = sum_{d | m} d * f(d)^(m/d)`.
pub fn weighted_divisor_sum(f: SignedWeight, m: u64) -> Result<i64> {
    if m == 0 {
        return Err(Error::InvalidInput("divisor sums need m >= 1".into()));
    }
    let mut total = 0i64;
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            let e = m / d;
            total += d as i64 * signed_power(weight_value(f, d)?, e);
            if e != d {
                total += e as i64 * signed_power(weight_value(f, e)?, d);
            }
        }
        d += 1;
    }
    Ok(total)
}

/// `S(0..=m)` for every index at once (entry 0 is unused and set to 0).
pub fn divisor_sum_table(f: SignedWeight, m: usize) -> Result<Vec<i64>> {
    if m == 0 {
        return Ok(vec![0]);
    }
    let w = sieve_weights(f, m)?;
    let mut table = vec![0i64; m + 1];
    for d in 1..=m {
        let fd = w[d - 1];
        if fd == 0 {
            continue;
        }
        let mut k = d;
        let mut e = 1u64;
        while k <= m {
            table[k] += d as i64 * signed_power(fd, e);
            k += d;
            e += 1;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spot_values() {
        assert_eq!(weight_value(SignedWeight::Mu, 1).unwrap(), 1);
        assert_eq!(weight_value(SignedWeight::Mu, 12).unwrap(), 0);
        assert_eq!(weight_value(SignedWeight::Lambda, 12).unwrap(), -1);
        assert_eq!(weight_value(SignedWeight::Primes, 9).unwrap(), 0);
        assert_eq!(weight_value(SignedWeight::Primes, 1).unwrap(), 0);
        assert_eq!(weight_value(SignedWeight::MuSq, 30).unwrap(), 1);
        assert!(weight_value(SignedWeight::Mu, 0).is_err());
    }

    #[test]
    fn sieves_match_hand_factorisation() {
        assert_eq!(
            sieve_weights(SignedWeight::Mu, 8).unwrap(),
            vec![1, -1, -1, 0, -1, 1, -1, 0]
        );
        assert_eq!(
            sieve_weights(SignedWeight::Lambda, 8).unwrap(),
            vec![1, -1, -1, 1, -1, 1, -1, -1]
        );
        assert!(sieve_weights(SignedWeight::Mu, 0).is_err());
        assert!(matches!(
            sieve_weights(SignedWeight::Mu, SIEVE_LIMIT + 1),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        for f in SignedWeight::ALL {
            let w = sieve_weights(f, 2000).unwrap();
            for (i, &v) in w.iter().enumerate() {
                assert_eq!(v, weight_value(f, i as u64 + 1).unwrap(), "{f} at {}", i + 1);
            }
        }
    }

    #[test]
    fn divisor_sums() {
        assert_eq!(weighted_divisor_sum(SignedWeight::One, 6).unwrap(), 12);
        assert_eq!(weighted_divisor_sum(SignedWeight::Mu, 2).unwrap(), -1);
        assert_eq!(weighted_divisor_sum(SignedWeight::Mu, 4).unwrap(), 3);
        for f in SignedWeight::ALL {
            let table = divisor_sum_table(f, 500).unwrap();
            for m in 1..=500u64 {
                assert_eq!(table[m as usize], weighted_divisor_sum(f, m).unwrap());
            }
        }
    }

    #[test]
    fn parse_names() {
        for f in SignedWeight::ALL {
            assert_eq!(f.name().parse::<SignedWeight>().unwrap(), f);
        }
        assert!("nu".parse::<SignedWeight>().is_err());
    }

    proptest! {
        #[test]
        fn liouville_is_completely_multiplicative(a in 1u64..5000, b in 1u64..5000) {
            let l = |n| weight_value(SignedWeight::Lambda, n).unwrap();
            prop_assert_eq!(l(a * b), l(a) * l(b));
        }

        #[test]
        fn weights_are_signs(n in 1u64..1_000_000) {
            for f in SignedWeight::ALL {
                let v = weight_value(f, n).unwrap();
                prop_assert!((-1..=1).contains(&v));
            }
        }
    }
}
