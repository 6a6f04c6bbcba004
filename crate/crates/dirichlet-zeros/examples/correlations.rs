//! Correlation structure of the series along the dyadic points
//! σ_n = 1/2 + 2^-n, and the closed-form orthant indicator correlation
//! against a bivariate-Gaussian Monte Carlo.
//!
//!     cargo run --release --example correlations

use dirichlet_zeros::simulate::{
    mc_orthant_correlation, mc_series_correlation, orthant_indicator_correlation,
    series_correlation,
};

fn main() {
    println!("corr(F(sigma_k), F(sigma_l)) = zeta(sigma_k+sigma_l)/sqrt(zeta(2 sigma_k) zeta(2 sigma_l))");
    println!();
    println!("decay along the dyadic sequence (bound 3/sqrt(2)^|k-l|):");
    for l in [2usize, 5, 10, 15, 20, 25] {
        let k = 1usize;
        let sk = 0.5 + 0.5f64.powi(k as i32);
        let sl = 0.5 + 0.5f64.powi(l as i32);
        let corr = series_correlation(sk, sl).unwrap();
        let bound = 3.0 / 2f64.sqrt().powi((l - k) as i32);
        println!("  |corr(sigma_1, sigma_{l:>2})| = {:.6}  bound {bound:.6}", corr.abs());
    }

    println!();
    let (sk, sl) = (0.75, 1.0);
    let closed = series_correlation(sk, sl).unwrap();
    let (mc, se) = mc_series_correlation(sk, sl, 100_000, 4000, 17).unwrap();
    println!("corr(F({sk}), F({sl})): closed form {closed:.6}, Monte Carlo {mc:.6} ± {se:.6}");

    println!();
    println!("orthant indicator correlation (2/pi) arctan(rho/sqrt(1-rho^2)):");
    for rho in [-0.9f64, -0.5, 0.0, 0.5, 0.9] {
        let c = orthant_indicator_correlation(rho).unwrap();
        let (mc, se) = mc_orthant_correlation(rho.clamp(-0.999, 0.999), 200_000, 3).unwrap();
        println!("  rho = {rho:+.1}: closed {c:+.6}, MC {mc:+.6} ± {se:.6}");
    }
    println!();
    println!("at rho = 1/2 the closed form is exactly 1/3: {}", orthant_indicator_correlation(0.5).unwrap());
}
