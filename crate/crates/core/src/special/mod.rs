//! Double-precision special functions and wide-range number types.

pub mod constants;
pub mod ext;
pub mod gamma;
pub mod zeta;

pub use constants::{ELL_2, ELL_PI, KAPPA, ZFRAK};
pub use ext::{ext_sum, ExtReal, LogPolarComplex};
pub use gamma::{gamma_cx, ln_gamma};
pub use zeta::{zeta, zeta_and_derivative, zeta_prime, zeta_with_tolerance};
