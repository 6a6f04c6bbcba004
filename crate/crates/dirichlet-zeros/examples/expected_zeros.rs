//! Expected number of real zeros E N(T, ∞) three ways: adaptive Kac-Rice
//! quadrature, the logarithmic expansion, and the leading-term asymptotic.
//!
//!     cargo run --release --example expected_zeros

use dirichlet_zeros::expected::{
    calibrated_expansion, expected_zero_count, expected_zero_count_expansion, RealInterval,
};

fn main() {
    let two_pi = 2.0 * std::f64::consts::PI;
    let coeffs = calibrated_expansion().expect("calibration");
    println!("calibrated c0 = {:.12}", coeffs.c0.unwrap());
    println!();
    println!(
        "{:>10}  {:>16}  {:>16}  {:>12}  {:>10}",
        "T - 1/2", "quadrature", "expansion", "|difference|", "ratio/log"
    );
    let mut x = 1e-2;
    while x >= 0.9e-8 {
        let t = 0.5 + x;
        let q = expected_zero_count(RealInterval::to_infinity(t).unwrap(), 1e-10).unwrap();
        let e = expected_zero_count_expansion(t, coeffs).unwrap();
        println!(
            "{x:>10.1e}  {:>16.12}  {:>16.12}  {:>12.2e}  {:>10.7}",
            q.value,
            e,
            (q.value - e).abs(),
            q.value / (1.0 / x).ln()
        );
        x /= 10.0;
    }
    println!();
    println!(
        "the ratio column approaches 1/(2 pi) = {:.7}; the gap is the\nadditive constant c0 divided by log(1/(T-1/2))",
        1.0 / two_pi
    );
}
