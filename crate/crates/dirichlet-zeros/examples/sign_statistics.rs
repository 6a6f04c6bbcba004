//! Sign statistics S±(R) along σ_n = 1/2 + 2^-n and growth diagnostics for
//! the zero counting function. The almost-sure limit theorems themselves
//! are not finite-computation checkable; these are trend plots, not tests.
//!
//!     cargo run --release --example sign_statistics

use dirichlet_zeros::expected::RealInterval;
use dirichlet_zeros::simulate::{
    count_zeros, jackknife_se, sample_coefficients, sign_statistics, sign_statistics_trials,
    trial_rng,
};

fn main() {
    // one path, watched along the dyadic sequence
    let n = 1 << 20;
    let coeffs = sample_coefficients(n, &mut trial_rng(123, 0));
    println!("one sampled path (N = 2^20):");
    println!("{:>4} {:>6} {:>6} {:>18}", "R", "S+", "S-", "|S+ - R/2|/R^0.6");
    for r in [5usize, 10, 15, 20] {
        let s = sign_statistics(&coeffs, r).unwrap();
        println!(
            "{r:>4} {:>6} {:>6} {:>18.4}",
            s.plus,
            s.minus,
            (s.plus as f64 - r as f64 / 2.0).abs() / (r as f64).powf(0.6)
        );
    }

    // ensemble: the law-of-large-numbers band S± = R/2 + O(R^(1/2+ε))
    println!();
    println!("ensemble of 400 paths:");
    println!("{:>4} {:>10} {:>10} {:>22}", "R", "mean S+/R", "se", "mean |S+ - R/2|/R^0.6");
    for r in [10usize, 15, 20] {
        let stats = sign_statistics_trials(1 << r, r, 400, 7).unwrap();
        let ratios: Vec<f64> = stats.iter().map(|s| s.plus as f64 / r as f64).collect();
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let scaled: Vec<f64> = stats
            .iter()
            .map(|s| (s.plus as f64 - r as f64 / 2.0).abs() / (r as f64).powf(0.6))
            .collect();
        println!(
            "{r:>4} {mean:>10.4} {:>10.4} {:>22.4}",
            jackknife_se(&ratios),
            scaled.iter().sum::<f64>() / scaled.len() as f64
        );
    }

    // zero-count growth against the log and log·loglog envelopes
    println!();
    println!("zero counts of one path on [1/2 + 2^-R, 1] against growth envelopes:");
    println!(
        "{:>4} {:>7} {:>12} {:>16}",
        "R", "N(T,1)", "count/log", "count/(log loglog)"
    );
    let coeffs = sample_coefficients(1 << 20, &mut trial_rng(123, 1));
    for r in [6usize, 9, 12, 15, 18] {
        let t = 0.5 + 0.5f64.powi(r as i32);
        let interval = RealInterval::new(t, 1.0).unwrap();
        let log = (1.0 / (t - 0.5)).ln();
        let grid = (2000.0 * log) as usize;
        let s = count_zeros(&coeffs, interval, grid, 1e-10).unwrap();
        println!(
            "{r:>4} {:>7} {:>12.4} {:>16.4}",
            s.refined_count,
            s.refined_count as f64 / log,
            s.refined_count as f64 / (log * log.ln().max(1.0))
        );
    }
    println!();
    println!("(truncation freezes the path below sigma - 1/2 ~ 1/log N, so the");
    println!("envelopes flatten once 2^-R crosses that scale)");
}
