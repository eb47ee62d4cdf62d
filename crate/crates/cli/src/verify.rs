//! Self-checks run by `sigpart verify`.

use std::time::Instant;

use anyhow::Result;
use sigpart::residues::{mu_origin_coefficients, partial_residue_sum_to, threshold_report};
use sigpart::zeros::{riemann_von_mangoldt, trudgian_radius};
use sigpart::{
    brute_force_p, c0_lambda, count_zeros, dyadic_count_check, first_positive_crossing,
    partition_table, phi0_line_integral, phi0_zero_sum, refine_zero, residue_lambda, residue_mu,
    tail_bound, trudgian_window, zero_inputs, ExtReal, KernelKind, SignedWeight, ZeroTable,
};

pub const MU_ZERO_LIST: [usize; 7] = [2, 4, 5, 7, 8, 11, 15];
pub const LAMBDA_ZERO_LIST: [usize; 5] = [2, 8, 9, 11, 25];

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    ZeroLists,
    Oracle,
    Constants,
    Threshold,
    Trudgian,
    Signs,
    Phi0,
    Crossing,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Check {
            name: name.into(),
            pass,
            detail,
        }
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    ((value - target) / target).abs() <= rel
}

pub fn zero_lists(n_max: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (f, expected) in [
        (SignedWeight::Mu, &MU_ZERO_LIST[..]),
        (SignedWeight::Lambda, &LAMBDA_ZERO_LIST[..]),
    ] {
        let start = Instant::now();
        let table = partition_table(f, n_max)?;
        let found = zero_inputs(&table);
        let want: Vec<usize> = expected.iter().copied().filter(|&n| n <= n_max).collect();
        out.push(Check::new(
            &format!("zero-list {f} n<={n_max}"),
            found == want,
            format!("found {found:?} in {:.1?}", start.elapsed()),
        ));
    }
    Ok(out)
}

pub fn oracle() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in [SignedWeight::One, SignedWeight::Mu, SignedWeight::Lambda, SignedWeight::MuSq] {
        let table = partition_table(f, 40)?;
        let mut mismatches = Vec::new();
        for n in 1..=40 {
            if table.values()[n] != brute_force_p(f, n)? {
                mismatches.push(n);
            }
        }
        out.push(Check::new(
            &format!("recursion vs enumeration {f}"),
            mismatches.is_empty(),
            format!("mismatches {mismatches:?}"),
        ));
    }
    Ok(out)
}

pub fn constants() -> Result<Vec<Check>> {
    let c0 = c0_lambda();
    let g1 = refine_zero(14.134725142)?;
    let g2 = refine_zero(21.022039639)?;
    let lam1 = residue_lambda(g1)?.abs_value.to_f64();
    let mu1 = residue_mu(g1)?;
    let mu1c = mu1.value.to_complex();
    let mu2 = residue_mu(g2)?.abs_value.to_f64();
    let (a, b, c) = mu_origin_coefficients();
    let rounded = |v: f64| format!("{v:.2}");
    Ok(vec![
        Check::new("c0", (c0 - 1.28).abs() <= 0.01, format!("{c0:.6}")),
        Check::new("|c_rho1| lambda", within(lam1, 1.27e-9, 0.02), format!("{lam1:.4e}")),
        Check::new(
            "c_rho1 mu",
            within(mu1.abs_value.to_f64(), 4.41e-10, 0.02)
                && within(mu1c.re, -4.7e-11, 0.05)
                && within(mu1c.im, 4.4e-10, 0.05),
            format!("{:.4e} {:+.4e}i", mu1c.re, mu1c.im),
        ),
        Check::new("|c_rho2| mu", within(mu2, 7.78e-15, 0.02), format!("{mu2:.4e}")),
        Check::new(
            "triple pole coefficients",
            rounded(a) == "-0.18" && format!("{b:.3}") == "0.076" && rounded(c) == "0.12",
            format!("({a:.6}, {b:.6}, {c:.6})"),
        ),
    ])
}

pub fn threshold(table: &ZeroTable, k: u32, c: ExtReal) -> Result<Vec<Check>> {
    let height = 2f64.powi(k as i32);
    table.ensure_covers(height)?;
    let start = Instant::now();
    let partial = partial_residue_sum_to(KernelKind::Lambda, table, height)?;
    let used = table.up_to(height).len();
    let tail = tail_bound(k, c)?;
    let report = threshold_report(k, c, partial, tail)?;
    let limit = ExtReal::new(1.0, -17881) * c;
    Ok(vec![
        Check::new(
            &format!("partial residue sum K={k}"),
            within(partial.to_f64(), 1.27e-9, 0.02),
            format!("{partial:.6} over {used} zeros in {:.1?}", start.elapsed()),
        ),
        Check::new(
            &format!("tail bound K={k}"),
            k != 15 || tail <= limit,
            format!("{tail:.4}"),
        ),
        Check::new(
            "threshold",
            report.pass(),
            format!("margin={}", report.threshold_margin),
        ),
    ])
}

pub fn trudgian(table: &ZeroTable) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for t in [50.0, 100.0, 500.0, 1000.0] {
        if table.ensure_covers(t).is_err() {
            continue;
        }
        let n = count_zeros(table, t)?;
        let (lo, hi) = trudgian_window(t)?;
        out.push(Check::new(
            &format!("N({t})"),
            (lo..=hi).contains(&(n as f64)),
            format!(
                "{n} in [{lo:.2}, {hi:.2}] (main term {:.2} +- {:.2})",
                riemann_von_mangoldt(t),
                trudgian_radius(t)
            ),
        ));
    }
    for k in 5..=14 {
        if table.ensure_covers(2f64.powi(k as i32 + 1)).is_err() {
            break;
        }
        let r = dyadic_count_check(table, k)?;
        out.push(Check::new(
            &format!("dyadic k={k}"),
            r.pass,
            format!("{} <= {}", r.actual, r.bound),
        ));
    }
    Ok(out)
}

pub fn signs() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for f in [SignedWeight::Mu, SignedWeight::Lambda] {
        let table = partition_table(f, 250)?;
        let bad: Vec<usize> = (51..=250)
            .filter(|&n| table.sign(n) != if n % 2 == 0 { 1 } else { -1 })
            .collect();
        out.push(Check::new(
            &format!("alternating signs {f} 50<n<=250"),
            bad.is_empty(),
            format!("exceptions {bad:?}"),
        ));
    }
    Ok(out)
}

pub fn phi0(table: &ZeroTable) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for x in [1e4, 1e6, 1e8] {
        let line = phi0_line_integral(KernelKind::Lambda, x, 0.8, 60.0)?;
        let sum = phi0_zero_sum(KernelKind::Lambda, x, table)?;
        let diff = (line.value - sum.value).abs();
        let budget = 2.0 * f64::powf(x, 1.0 / 6.0);
        out.push(Check::new(
            &format!("phi0 lambda x={x:e}"),
            diff <= budget,
            format!("line {:.6} zeros {:.6} |diff| {diff:.4} <= {budget:.4}", line.value, sum.value),
        ));
    }
    let a = phi0_line_integral(KernelKind::Lambda, 1e4, 0.7, 60.0)?.value;
    let b = phi0_line_integral(KernelKind::Lambda, 1e4, 0.9, 60.0)?.value;
    out.push(Check::new(
        "contour independence",
        (a - b).abs() <= 1e-6,
        format!("{:.3e}", (a - b).abs()),
    ));
    Ok(out)
}

pub fn crossing() -> Result<Vec<Check>> {
    let x = first_positive_crossing()?;
    Ok(vec![Check::new(
        "first positive envelope crossing",
        (1e49..=1e52).contains(&x),
        format!("{x:.4e}"),
    )])
}
