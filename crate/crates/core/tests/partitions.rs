use num_bigint::BigInt;
use proptest::prelude::*;
use sigpart::special::KAPPA;
use sigpart::{
    brute_force_p, detect_strings, expsc, logsc, logsc_big, partition_table, SignedWeight,
    StringMode,
};

#[test]
fn recursion_matches_enumeration() {
    for f in SignedWeight::ALL {
        let t = partition_table(f, 40).unwrap();
        for n in 1..=40 {
            assert_eq!(t.values()[n], brute_force_p(f, n).unwrap(), "{f} n={n}");
        }
    }
}

#[test]
fn unit_weight_growth_trend() {
    let t = partition_table(SignedWeight::One, 10_000).unwrap();
    let r3 = t.logsc(1000) / (KAPPA * 1000f64.sqrt());
    let r4 = t.logsc(10_000) / (KAPPA * 100.0);
    assert!(r3 < r4 && r4 < 1.0, "{r3} {r4}");
}

#[test]
fn squarefree_growth_trend() {
    let t = partition_table(SignedWeight::MuSq, 10_000).unwrap();
    let scale = |n: f64| KAPPA * (6.0 * n).sqrt() / std::f64::consts::PI;
    let r3 = t.logsc(1000) / scale(1000.0);
    let r4 = t.logsc(10_000) / scale(10_000.0);
    assert!((r4 - 1.0).abs() < (r3 - 1.0).abs(), "{r3} {r4}");
}

#[test]
fn signs_alternate_past_fifty() {
    for f in [SignedWeight::Mu, SignedWeight::Lambda] {
        let t = partition_table(f, 250).unwrap();
        for n in 51..=250 {
            let expected = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(t.sign(n), expected, "{f} n={n}");
        }
        let strings = detect_strings(&t, 10);
        assert!(strings
            .iter()
            .any(|s| s.mode == StringMode::Alternating && s.start <= 51 && s.end() == 250));
    }
}

#[test]
fn big_logsc_matches_float_path() {
    let t = partition_table(SignedWeight::Mu, 2000).unwrap();
    for n in [100, 500, 2000] {
        let v = &t.values()[n];
        let approx: f64 = v.to_string().parse().unwrap();
        assert!((logsc_big(v) - logsc(approx)).abs() < 1e-9);
    }
    assert_eq!(logsc_big(&BigInt::from(0)), 0.0);
}

proptest! {
    #[test]
    fn logsc_is_odd_and_invertible(x in -1e12f64..1e12) {
        prop_assert_eq!(logsc(-x), -logsc(x));
        let back = expsc(logsc(x));
        prop_assert!((back - x).abs() <= 1e-9 * x.abs().max(1.0));
    }

    #[test]
    fn logsc_is_increasing(a in -1e6f64..1e6, d in 1e-3f64..1e3) {
        prop_assert!(logsc(a + d) > logsc(a));
    }
}
