//! Generalised frequency sets: supercritical, critical and subcritical
//! regimes of the expected zero count, the sqrt(2) law for tau-weighted
//! integers, and the J(γ, σ) integral.
//!
//!     cargo run --release --example frequency_sets

use dirichlet_zeros::expected::RealInterval;
use dirichlet_zeros::general::{
    expected_zero_count_alpha, integral_j, kac_integrand_alpha, regime_prediction, FrequencySet,
};

fn main() {
    let pi = std::f64::consts::PI;

    println!("regime predictions:");
    for alpha in [0.0f64, 1.0, 3.0, -1.0, -1.5] {
        let p = regime_prediction(alpha);
        println!(
            "  alpha = {alpha:+.1}: {:?}, E N ~ {} (constant {:?})",
            p.regime, p.leading_form, p.leading_constant
        );
    }

    println!();
    println!("supercritical slopes d E N / d log(1/(T-1/2)):");
    let cases: [(f64, FrequencySet); 3] = [
        (0.0, FrequencySet::integers()),
        (1.0, FrequencySet::model(1.0).unwrap()),
        (3.0, FrequencySet::model(3.0).unwrap()),
    ];
    for (alpha, set) in cases {
        let v = |x: f64| {
            expected_zero_count_alpha(RealInterval::to_infinity(0.5 + x).unwrap(), &set, 1e-8)
                .unwrap()
                .value
        };
        let slope = (v(1e-8) - v(1e-5)) / (1e8f64.ln() - 1e5f64.ln());
        println!(
            "  alpha = {alpha}: fitted {slope:.6}, predicted sqrt(1+alpha)/(2 pi) = {:.6}",
            (1.0 + alpha).sqrt() / (2.0 * pi)
        );
    }

    println!();
    println!("critical case (primes): E N / sqrt(log(1/(T-1/2))) -> 1/pi = {:.6}", 1.0 / pi);
    for x in [1e-4f64, 1e-6, 1e-8] {
        let q = expected_zero_count_alpha(
            RealInterval::to_infinity(0.5 + x).unwrap(),
            &FrequencySet::primes(),
            1e-6,
        )
        .unwrap();
        println!("  T - 1/2 = {x:.0e}: ratio {:.6}", q.value / (1.0 / x).ln().sqrt());
    }

    println!();
    println!("subcritical example p_n = n (log(n+2))^1.5 (alpha = -1.5): E N approaches a constant");
    let sub = FrequencySet::power_log_list(-1.5, 50_000).unwrap();
    for x in [1e-3f64, 1e-5, 1e-7] {
        let q = expected_zero_count_alpha(RealInterval::to_infinity(0.5 + x).unwrap(), &sub, 1e-6)
            .unwrap();
        println!("  T - 1/2 = {x:.0e}: E N = {:.6}", q.value);
    }

    println!();
    println!("tau-weighted integers (zeta_* = zeta^2): integrand is sqrt(2) x the base one");
    for sigma in [0.51f64, 0.6, 1.0, 2.0] {
        let w = kac_integrand_alpha(sigma, &FrequencySet::tau_weighted()).unwrap();
        let b = dirichlet_zeros::expected::kac_integrand(sigma).unwrap();
        println!("  sigma = {sigma}: ratio = {:.12}", w / b);
    }

    println!();
    println!("J(gamma, sigma) = integral_2^inf (log x)^gamma x^(-2 sigma) dx near sigma = 1/2:");
    let sigma = 0.5 + 1e-8;
    for gamma in [-1.0f64, 0.0, 0.5, 1.0, 2.0] {
        let j = integral_j(gamma, sigma).unwrap();
        println!("  gamma = {gamma:+.1}: J = {j:.6e}");
    }
}
