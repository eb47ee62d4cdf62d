use std::f64::consts::PI;

/// `pi * sqrt(2/3)`, the growth rate of `log p(n)`.
pub const KAPPA: f64 = 2.565_099_660_323_728;

/// `zeta(2) = pi^2 / 6`.
pub const ZFRAK: f64 = PI * PI / 6.0;

/// `log 2`.
pub const ELL_2: f64 = std::f64::consts::LN_2;

/// `log pi`.
pub const ELL_PI: f64 = 1.144_729_885_849_400_2;

/// `kappa / zeta(2)`, the scale of the saddle point for the Liouville weight.
pub const KAPPA_OVER_ZFRAK: f64 = KAPPA / ZFRAK;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities() {
        assert!((KAPPA - PI * (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((KAPPA * KAPPA - 4.0 * ZFRAK).abs() < 1e-15);
        assert!((ELL_PI - PI.ln()).abs() < 1e-16);
    }
}
