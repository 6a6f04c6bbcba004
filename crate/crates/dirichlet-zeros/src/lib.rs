//! Real zeros of Gaussian random Dirichlet series F(σ) = Σ X_n n^-σ.
//!
//! The crate computes the expected number of real zeros E N(T, U) three
//! independent ways and cross-checks them:
//!
//! * exact Kac-Rice quadrature of (1/π) √((log ζ)''(2σ)) ([`expected`]),
//! * the logarithmic expansion (1/2π) log(1/(T-1/2)) + c_0 + Σ c_n (T-1/2)^n
//!   whose coefficients come from exact truncated-series algebra over the
//!   Stieltjes constants ([`series`]),
//! * Monte Carlo simulation of truncated series with sign-scan zero
//!   counting ([`simulate`]).
//!
//! Generalised frequency sets (primes, weighted integers, synthetic sets
//! with counting function x (log x)^α) live in [`general`], including the
//! critical/supercritical/subcritical regime classification.
//!
//! Start with the runnable examples (`cargo run --example expected_zeros`)
//! or the `dirichlet-zeros` binary, which exposes every computation as a
//! subcommand with JSON/CSV output.

// `!(x > 0.0)` style comparisons are deliberate throughout: NaN arguments
// must fail closed into domain errors.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
mod util;

pub mod special;
pub mod zeta;

pub mod series;

pub mod quad;

pub mod expected;

pub(crate) mod compress;
pub mod simulate;

pub mod general;

pub mod manifest;

pub mod cli;

pub use error::{Error, Result};
pub use expected::{
    calibrate_c0, expected_zero_count, expected_zero_count_expansion,
    expected_zero_count_truncated, kac_integrand, RealInterval,
};
pub use general::{
    expected_zero_count_alpha, gamma_function, generate_primes, integral_j, regime_prediction,
    zeta_alpha, FrequencySet, Regime, RegimePrediction,
};
pub use quad::QuadratureResult;
pub use series::{ExpansionCoefficients, GammaPoly, TruncatedSeries};
pub use simulate::{
    count_zeros, estimate_moments, evaluate_path, orthant_indicator_correlation,
    sample_coefficients, series_correlation, sign_statistics, tail_probability, SignStatistics,
    SimulationConfig, ZeroCountSample,
};
pub use zeta::{
    cached_stieltjes, log_zeta_second_derivative, stieltjes_constants, von_mangoldt, zeta,
    zeta_derivative, StieltjesTable, ZetaEvaluation,
};
