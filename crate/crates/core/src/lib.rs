//! Signed partition numbers `p(n, f)` for arithmetic weights such as the
//! Möbius and Liouville functions, together with the analytic machinery that
//! predicts them: saddle-point profiles, zeta-zero residues and explicit
//! zero sums.

pub mod error;
pub mod partition;
pub mod phi0;
pub mod quad;
pub mod residues;
pub mod saddle;
pub mod scale;
pub mod special;
pub mod weight;
pub mod zeros;

pub use error::{Error, Result};
pub use partition::{
    brute_force_p, detect_strings, partition_table, zero_inputs, PartitionTable, Provenance,
    SignString, StringMode,
};
pub use scale::{expsc, logsc, logsc_big};
pub use weight::{sieve_weights, weight_value, weighted_divisor_sum, SignedWeight};
pub use phi0::{
    first_positive_crossing, mu_envelope, phi0_line_integral, phi0_zero_sum, MuEnvelope,
    Phi0Evaluation, Phi0Method,
};
pub use residues::{
    c0_lambda, mu_origin_residue, partial_residue_sum, residue_lambda, residue_mu, tail_bound,
    threshold_check, KernelKind, ResidueRecord, TailBoundReport,
};
pub use saddle::{
    phi_profile, predict_logsc_p, psi_j, solve_saddle, Branch, Prediction, PsiSeries,
    SaddleProfile,
};
pub use special::{ExtReal, LogPolarComplex};
pub use zeros::{
    count_zeros, dyadic_count_check, load_zeros, refine_zero, trudgian_window, DyadicReport,
    ZeroTable,
};
