//! Exact signed partition numbers `p(n, f) = sum over partitions of n of f(parts)`.
//!
//! Values come from the convolution identity
//! `n p(n, f) = sum_{k=1..n} S(k, f) p(n - k, f)` with `p(0, f) = 1`, where
//! `S(k, f) = sum_{d | k} d f(d)^(k/d)`. Every quotient is checked for exact
//! divisibility, which catches any corruption of the running table.

use std::io::{BufRead, Write};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::weight::{divisor_sum_table, sieve_weights, SignedWeight};

/// Largest `n` accepted by [`brute_force_p`].
pub const BRUTE_FORCE_LIMIT: usize = 60;

/// Prefix of a loaded cache that is re-derived by enumeration.
pub const CACHE_ORACLE_PREFIX: usize = 40;

const PARALLEL_THRESHOLD: usize = 4096;
const PARALLEL_CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Computed,
    LoadedFromCache,
}

/// `p(0..=N, f)` for one weight.
#[derive(Debug, Clone)]
pub struct PartitionTable {
    weight: SignedWeight,
    values: Vec<BigInt>,
    provenance: Provenance,
}

impl PartitionTable {
    pub fn weight(&self) -> SignedWeight {
        self.weight
    }

    /// Largest index held.
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// The prefix `p(0..=n_max, f)`.
    pub fn truncated(&self, n_max: usize) -> PartitionTable {
        PartitionTable {
            weight: self.weight,
            values: self.values[..=n_max.min(self.n_max())].to_vec(),
            provenance: self.provenance,
        }
    }

    /// Sign of `p(n, f)` as -1, 0 or 1.
    pub fn sign(&self, n: usize) -> i8 {
        match self.values[n].sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn logsc(&self, n: usize) -> f64 {
        crate::scale::logsc_big(&self.values[n])
    }

    /// Writes the cache format: a `# f=<kind> N=<max>` header then `n<TAB>value` rows.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# f={} N={}", self.weight, self.n_max())?;
        for (n, v) in self.values.iter().enumerate() {
            writeln!(out, "{n}\t{v}")?;
        }
        Ok(())
    }

    /// Reads a cache written by [`PartitionTable::write_cache`] and re-checks
    /// the first entries against enumeration.
    pub fn read_cache<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Cache("empty file".into()))??;
        let (weight, n_max) = parse_header(&header)?;
        let mut values = Vec::with_capacity(n_max + 1);
        for (idx, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (n, v) = line
                .split_once('\t')
                .ok_or_else(|| Error::Cache(format!("row {}: expected n<TAB>value", idx + 2)))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| Error::Cache(format!("row {}: bad index '{n}'", idx + 2)))?;
            if n != values.len() {
                return Err(Error::Cache(format!(
                    "row {}: index {n} out of sequence (expected {})",
                    idx + 2,
                    values.len()
                )));
            }
            let v: BigInt = v
                .trim()
                .parse()
                .map_err(|_| Error::Cache(format!("row {}: bad integer", idx + 2)))?;
            values.push(v);
        }
        if values.len() != n_max + 1 {
            return Err(Error::Cache(format!(
                "header promises N={n_max} but {} rows were read",
                values.len()
            )));
        }
        for n in 0..=n_max.min(CACHE_ORACLE_PREFIX) {
            let expected = if n == 0 {
                BigInt::one()
            } else {
                brute_force_p(weight, n)?
            };
            if values[n] != expected {
                return Err(Error::Cache(format!(
                    "p({n}, {weight}) = {} disagrees with enumeration ({expected})",
                    values[n]
                )));
            }
        }
        Ok(Self {
            weight,
            values,
            provenance: Provenance::LoadedFromCache,
        })
    }
}

fn parse_header(line: &str) -> Result<(SignedWeight, usize)> {
    let body = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Cache(format!("bad header '{line}'")))?;
    let mut weight = None;
    let mut n_max = None;
    for field in body.split_whitespace() {
        match field.split_once('=') {
            Some(("f", v)) => weight = Some(v.parse::<SignedWeight>()?),
            Some(("N", v)) => {
                n_max = Some(
                    v.parse::<usize>()
                        .map_err(|_| Error::Cache(format!("bad N in header '{line}'")))?,
                )
            }
            _ => return Err(Error::Cache(format!("unexpected header field '{field}'"))),
        }
    }
    match (weight, n_max) {
        (Some(w), Some(n)) => Ok((w, n)),
        _ => Err(Error::Cache(format!("header '{line}' needs f= and N="))),
    }
}

/// Sign and little-endian 64-bit magnitude of a table entry, kept alongside
/// the `BigInt` so the convolution can run without allocating.
struct Limbs {
    negative: bool,
    mag: Vec<u64>,
}

impl Limbs {
    fn from_bigint(v: &BigInt) -> Self {
        Limbs {
            negative: v.sign() == Sign::Minus,
            mag: v.magnitude().to_u64_digits(),
        }
    }
}

/// `acc += a * s` on raw magnitudes; `acc` must have room for the carry.
#[inline]
fn mac(acc: &mut [u64], a: &[u64], s: u64) {
    let mut carry: u128 = 0;
    let mut i = 0;
    while i < a.len() {
        let t = acc[i] as u128 + a[i] as u128 * s as u128 + carry;
        acc[i] = t as u64;
        carry = t >> 64;
        i += 1;
    }
    while carry != 0 {
        let t = acc[i] as u128 + carry;
        acc[i] = t as u64;
        carry = t >> 64;
        i += 1;
    }
}

fn biguint_from_u64s(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

/// Accumulates `sum_{k in range} S(k) p(n-k)` as (positive part, negative part).
fn convolve(
    limbs: &[Limbs],
    sums: &[i64],
    n: usize,
    range: std::ops::Range<usize>,
    width: usize,
) -> (Vec<u64>, Vec<u64>) {
    let mut pos = vec![0u64; width];
    let mut neg = vec![0u64; width];
    for k in range {
        let s = sums[k];
        if s == 0 {
            continue;
        }
        let v = &limbs[n - k];
        if v.mag.is_empty() {
            continue;
        }
        if (s < 0) ^ v.negative {
            mac(&mut neg, &v.mag, s.unsigned_abs());
        } else {
            mac(&mut pos, &v.mag, s.unsigned_abs());
        }
    }
    (pos, neg)
}

fn add_into(acc: &mut [u64], other: &[u64]) {
    let mut carry = 0u64;
    for (a, &b) in acc.iter_mut().zip(other) {
        let (s1, c1) = a.overflowing_add(b);
        let (s2, c2) = s1.overflowing_add(carry);
        *a = s2;
        carry = u64::from(c1) + u64::from(c2);
    }
    debug_assert_eq!(carry, 0);
}

/// Builds `p(0..=n_max, f)` exactly.
pub fn partition_table(f: SignedWeight, n_max: usize) -> Result<PartitionTable> {
    if n_max == 0 {
        return Err(Error::InvalidInput("partition tables need N >= 1".into()));
    }
    let sums = divisor_sum_table(f, n_max)?;
    let mut values: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    let mut limbs: Vec<Limbs> = Vec::with_capacity(n_max + 1);
    values.push(BigInt::one());
    limbs.push(Limbs::from_bigint(&values[0]));
    let mut max_len = 1usize;

    for n in 1..=n_max {
        // |S(k)| < 2^32 for every table this size, so two spare limbs hold
        // the product and a further ceil(log2(n)/64) the running sum.
        let width = max_len + 3;
        let (mut pos, mut neg) = if n >= PARALLEL_THRESHOLD {
            let chunks: Vec<_> = (1..=n)
                .step_by(PARALLEL_CHUNK)
                .map(|lo| lo..(lo + PARALLEL_CHUNK).min(n + 1))
                .collect();
            chunks
                .into_par_iter()
                .map(|r| convolve(&limbs, &sums, n, r, width))
                .reduce(
                    || (vec![0u64; width], vec![0u64; width]),
                    |(mut p1, mut n1), (p2, n2)| {
                        add_into(&mut p1, &p2);
                        add_into(&mut n1, &n2);
                        (p1, n1)
                    },
                )
        } else {
            convolve(&limbs, &sums, n, 1..n + 1, width)
        };
        trim(&mut pos);
        trim(&mut neg);
        let total = BigInt::from_biguint(Sign::Plus, biguint_from_u64s(&pos))
            - BigInt::from_biguint(Sign::Plus, biguint_from_u64s(&neg));
        let (q, r) = total.div_rem(&BigInt::from(n));
        if !r.is_zero() {
            return Err(Error::Consistency(format!(
                "convolution for n = {n} (weight {f}) is not divisible by n"
            )));
        }
        let l = Limbs::from_bigint(&q);
        max_len = max_len.max(l.mag.len());
        limbs.push(l);
        values.push(q);
    }
    Ok(PartitionTable {
        weight: f,
        values,
        provenance: Provenance::Computed,
    })
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `p(n, f)` by enumerating every partition of `n` (descending parts).
pub fn brute_force_p(f: SignedWeight, n: usize) -> Result<BigInt> {
    if n == 0 {
        return Err(Error::InvalidInput("brute force needs n >= 1".into()));
    }
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut w = vec![0i64];
    w.extend(sieve_weights(f, n)?.into_iter().map(i64::from));

    // Sum of f(pi) over partitions of `remaining` into parts <= `largest`.
    fn walk(w: &[i64], remaining: usize, largest: usize) -> i64 {
        if remaining == 0 {
            return 1;
        }
        let mut total = 0;
        for part in (1..=largest.min(remaining)).rev() {
            let fw = w[part];
            if fw == 0 {
                continue;
            }
            total += fw * walk(w, remaining - part, part);
        }
        total
    }
    Ok(BigInt::from(walk(&w, n, n)))
}

/// Every `n <= N` with `p(n, f) = 0`, ascending.
pub fn zero_inputs(table: &PartitionTable) -> Vec<usize> {
    table
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(n, _)| n)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StringMode {
    /// `p(n, f) > 0` throughout.
    Positive,
    /// `sgn p(n, f) = (-1)^n` throughout.
    Alternating,
}

/// A maximal run `start..start + len` on which the mode's sign rule holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignString {
    pub start: usize,
    pub len: usize,
    pub mode: StringMode,
}

impl SignString {
    /// Last index covered.
    pub fn end(&self) -> usize {
        self.start + self.len - 1
    }

    pub fn contains(&self, n: usize) -> bool {
        n >= self.start && n <= self.end()
    }
}

/// Maximal sign strings of length at least `min_len` within `1..=N`, ordered
/// by start then mode. Zeros end every run.
pub fn detect_strings(table: &PartitionTable, min_len: usize) -> Vec<SignString> {
    let min_len = min_len.max(1);
    let mut out = Vec::new();
    for mode in [StringMode::Positive, StringMode::Alternating] {
        let mut run_start: Option<usize> = None;
        for n in 1..=table.n_max() + 1 {
            let holds = n <= table.n_max() && {
                let s = table.sign(n);
                match mode {
                    StringMode::Positive => s == 1,
                    StringMode::Alternating => s == if n % 2 == 0 { 1 } else { -1 },
                }
            };
            match (holds, run_start) {
                (true, None) => run_start = Some(n),
                (false, Some(start)) => {
                    if n - start >= min_len {
                        out.push(SignString {
                            start,
                            len: n - start,
                            mode,
                        });
                    }
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    out.sort_by_key(|s| (s.start, s.mode));
    out
}

impl PartialEq for PartitionTable {
    fn eq(&self, other: &Self) -> bool {
        self.weight == other.weight && self.values == other.values
    }
}
