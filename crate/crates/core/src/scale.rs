//! The sign-preserving logarithmic scale `logsc(x) = sgn(x) log(|x| + 1)`.

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

pub fn logsc(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    x.signum() * x.abs().ln_1p()
}

pub fn expsc(y: f64) -> f64 {
    if y == 0.0 {
        return 0.0;
    }
    y.signum() * y.abs().exp_m1()
}

/// `logsc` of an exact integer of any size.
pub fn logsc_big(a: &BigInt) -> f64 {
    let sign = match a.sign() {
        Sign::NoSign => return 0.0,
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    let mag = a.magnitude();
    let bits = mag.bits();
    if bits <= 1000 {
        return sign * mag.to_f64().unwrap_or(f64::INFINITY).ln_1p();
    }
    // Keep the leading 64 bits; the +1 is far below double precision.
    let shift = bits - 64;
    let top = (mag >> shift).to_f64().unwrap_or(f64::MAX);
    sign * (top.ln() + shift as f64 * std::f64::consts::LN_2)
}
