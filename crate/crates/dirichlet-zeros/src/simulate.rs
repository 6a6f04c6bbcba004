//! Monte Carlo engine: sample truncated Gaussian Dirichlet series, count
//! real zeros by sign-change scanning plus bisection, and estimate means,
//! moments, tail probabilities, sign statistics and correlations.
//!
//! Determinism contract: every trial draws from its own counter-based
//! ChaCha stream derived from (seed, trial index), so serial and parallel
//! runs produce identical output in identical order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::compress::ExpSumCompressor;
use crate::error::{Error, Result};
use crate::expected::RealInterval;
use crate::zeta::{em_tail, zeta_sk};

/// Hard cap on the truncation level chosen by the adequacy rule.
pub const TRUNCATION_CAP: usize = 1_000_000;

/// Grid resolution: points per unit of u = log(1/(σ - 1/2)). Zeros cluster
/// logarithmically toward 1/2, so the scan is uniform in u.
pub const GRID_DENSITY_PER_UNIT_U: f64 = 2000.0;

/// Everything a simulation run needs; `trials` independent paths of the
/// series truncated at `truncation` terms, scanned on `grid_points`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub truncation: usize,
    pub interval: RealInterval,
    pub grid_points: usize,
    pub bisection_tol: f64,
    pub trials: usize,
    pub seed: u64,
}

impl SimulationConfig {
    /// Config with truncation and grid chosen by the adequacy and density
    /// rules.
    pub fn for_interval(t: f64, u: f64, trials: usize, seed: u64) -> Result<Self> {
        let interval = RealInterval::new(t, u)?;
        if !u.is_finite() {
            return Err(Error::domain("simulation interval must be finite".to_string()));
        }
        let (truncation, _) = choose_truncation(t)?;
        let cfg = SimulationConfig {
            truncation,
            interval,
            grid_points: default_grid_points(interval),
            bisection_tol: 1e-10,
            trials,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncation < 2 {
            return Err(Error::domain("truncation must be >= 2".to_string()));
        }
        if self.grid_points < 2 {
            return Err(Error::domain("grid_points must be >= 2".to_string()));
        }
        if self.trials < 1 {
            return Err(Error::domain("trials must be >= 1".to_string()));
        }
        if !self.interval.u.is_finite() {
            return Err(Error::domain("simulation interval must be finite".to_string()));
        }
        if !(self.bisection_tol > 0.0) {
            return Err(Error::domain("bisection_tol must be positive".to_string()));
        }
        Ok(())
    }
}

/// Truncation level from the variance-tail rule
/// Σ_{n>N} n^-2T < 1e-6 Σ_{n<=N} n^-2T, capped at [`TRUNCATION_CAP`].
/// Returns (N, rule_satisfied); near T = 1/2 the rule is unsatisfiable
/// under the cap and the flag reports that honestly.
pub fn choose_truncation(t: f64) -> Result<(usize, bool)> {
    let s = 2.0 * t;
    if !(s > 1.0) {
        return Err(Error::domain("truncation rule needs T > 1/2".to_string()));
    }
    let (zeta_s, _) = zeta_sk(s, 0, -1.0)?;
    let mut n = 256usize;
    loop {
        let (tail, _) = em_tail(s, 0, n as f64 + 1.0, 12);
        let kept = zeta_s - tail;
        if tail < 1e-6 * kept {
            return Ok((n, true));
        }
        if n >= TRUNCATION_CAP {
            return Ok((TRUNCATION_CAP, false));
        }
        n = (n * 2).min(TRUNCATION_CAP);
    }
}

fn u_of(sigma: f64) -> f64 {
    (1.0 / (sigma - 0.5)).ln()
}

fn default_grid_points(interval: RealInterval) -> usize {
    let span = u_of(interval.t) - u_of(interval.u);
    ((GRID_DENSITY_PER_UNIT_U * span).ceil() as usize + 2).max(16)
}

/// Counter-based per-trial stream: parallel and serial runs match
/// bit-for-bit.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// N independent standard normal draws.
pub fn sample_coefficients(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// F_N(σ) = Σ_{n<=N} X_n n^-σ by direct summation.
pub fn evaluate_path(coeffs: &[f64], sigma: f64) -> Result<f64> {
    if !(sigma > 0.5) {
        return Err(Error::domain(format!(
            "evaluate_path requires sigma > 1/2, got {sigma}"
        )));
    }
    let mut acc = 0.0;
    for (i, &x) in coeffs.iter().enumerate() {
        if x != 0.0 {
            acc += x * (-(sigma) * ((i + 1) as f64).ln()).exp();
        }
    }
    Ok(acc)
}

/// Fast repeated evaluation of one path over a σ range.
pub(crate) struct PathEvaluator {
    comp: ExpSumCompressor,
}

impl PathEvaluator {
    pub fn from_coeffs(coeffs: &[f64], sigma_lo: f64, sigma_hi: f64) -> Self {
        let mut it = coeffs.iter().copied();
        PathEvaluator {
            comp: ExpSumCompressor::from_weight_stream(coeffs.len(), sigma_lo, sigma_hi, || {
                it.next().unwrap()
            }),
        }
    }

    /// Stream the Gaussian draws straight into block moments; the O(N)
    /// coefficient vector never materialises.
    pub fn sample(n: usize, sigma_lo: f64, sigma_hi: f64, rng: &mut impl Rng) -> Self {
        PathEvaluator {
            comp: ExpSumCompressor::from_weight_stream(n, sigma_lo, sigma_hi, || {
                rng.sample(StandardNormal)
            }),
        }
    }

    #[inline]
    pub fn eval(&self, sigma: f64) -> f64 {
        self.comp.eval(sigma, 0)
    }
}

/// Zero count of one path with the refinement diagnostic.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCountSample {
    pub count: usize,
    /// Recount on a doubled grid.
    pub refined_count: usize,
    /// Set when count != refined_count or an exact grid zero was hit.
    pub suspect: bool,
    /// Bisected zero locations from the base-grid pass.
    pub roots: Vec<f64>,
}

fn scan_count<F: Fn(f64) -> f64>(
    f: &F,
    interval: RealInterval,
    grid_points: usize,
    bisection_tol: f64,
    collect_roots: bool,
) -> (usize, Vec<f64>, bool) {
    let u_hi = u_of(interval.t);
    let u_lo = u_of(interval.u);
    let m = grid_points.max(2);
    let step = (u_hi - u_lo) / (m - 1) as f64;
    let mut count = 0usize;
    let mut roots = Vec::new();
    let mut suspect = false;
    let mut prev: Option<(f64, f64)> = None; // (σ, value) at last non-zero sample
    for j in 0..m {
        // descending u => ascending σ
        let u = u_hi - step * j as f64;
        let sigma = 0.5 + (-u).exp();
        let v = f(sigma);
        if v == 0.0 {
            // measure-zero event, but a finite grid can still produce it
            count += 1;
            suspect = true;
            if collect_roots {
                roots.push(sigma);
            }
            prev = None;
            continue;
        }
        if let Some((ps, pv)) = prev {
            if pv.signum() != v.signum() {
                let root = bisect(f, ps, pv, sigma, bisection_tol);
                count += 1;
                if collect_roots {
                    roots.push(root);
                }
            }
        }
        prev = Some((sigma, v));
    }
    (count, roots, suspect)
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, fa: f64, mut b: f64, tol: f64) -> f64 {
    let mut sign_a = fa.signum();
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == sign_a {
            a = mid;
            sign_a = fm.signum();
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

fn count_zeros_with<F: Fn(f64) -> f64>(
    f: &F,
    interval: RealInterval,
    grid_points: usize,
    bisection_tol: f64,
) -> ZeroCountSample {
    let (count, roots, s1) = scan_count(f, interval, grid_points, bisection_tol, true);
    let refined_points = 2 * (grid_points - 1) + 1;
    let (refined_count, _, s2) = scan_count(f, interval, refined_points, bisection_tol, false);
    ZeroCountSample {
        count,
        refined_count,
        suspect: s1 || s2 || count != refined_count,
        roots,
    }
}

/// Count real zeros of the path on a finite interval: uniform-in-u grid
/// scan, bisection of each bracketed sign change, recount on a doubled
/// grid for the suspect flag.
pub fn count_zeros(
    coeffs: &[f64],
    interval: RealInterval,
    grid_points: usize,
    bisection_tol: f64,
) -> Result<ZeroCountSample> {
    if !interval.u.is_finite() {
        return Err(Error::domain("count_zeros needs a finite interval".to_string()));
    }
    if grid_points < 2 {
        return Err(Error::domain("grid_points must be >= 2".to_string()));
    }
    let eval = PathEvaluator::from_coeffs(coeffs, interval.t, interval.u);
    Ok(count_zeros_with(
        &|s| eval.eval(s),
        interval,
        grid_points,
        bisection_tol,
    ))
}

/// Zero counts for every trial in the config, in trial order.
pub fn run_trials(config: &SimulationConfig) -> Result<Vec<ZeroCountSample>> {
    config.validate()?;
    (0..config.trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(config.seed, trial);
            let eval = PathEvaluator::sample(
                config.truncation,
                config.interval.t,
                config.interval.u,
                &mut rng,
            );
            Ok(count_zeros_with(
                &|s| eval.eval(s),
                config.interval,
                config.grid_points,
                config.bisection_tol,
            ))
        })
        .collect()
}

/// Jackknife standard error of the mean of `xs`.
pub fn jackknife_se(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let total: f64 = xs.iter().sum();
    let loo: Vec<f64> = xs.iter().map(|&x| (total - x) / (n - 1) as f64).collect();
    let loo_mean = loo.iter().sum::<f64>() / n as f64;
    let var: f64 = loo.iter().map(|&t| (t - loo_mean).powi(2)).sum::<f64>() * (n - 1) as f64
        / n as f64;
    var.sqrt()
}

/// Empirical k-th moment of the zero count with jackknife standard error.
/// Refined counts are used, per the missed-zero policy.
pub fn estimate_moments(config: &SimulationConfig, k: u32) -> Result<(f64, f64)> {
    if k < 1 {
        return Err(Error::domain("moment order must be >= 1".to_string()));
    }
    let samples = run_trials(config)?;
    let xs: Vec<f64> = samples
        .iter()
        .map(|s| (s.refined_count as f64).powi(k as i32))
        .collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    Ok((mean, jackknife_se(&xs)))
}

/// Empirical P(N >= λ log(1/(T-1/2))) with its binomial standard error.
pub fn tail_probability(config: &SimulationConfig, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 0.0) {
        return Err(Error::domain("lambda must be positive".to_string()));
    }
    let samples = run_trials(config)?;
    let threshold = lambda * (1.0 / (config.interval.t - 0.5)).ln();
    let n = samples.len();
    let hits = samples
        .iter()
        .filter(|s| s.refined_count as f64 >= threshold)
        .count();
    let p = hits as f64 / n as f64;
    Ok((p, (p * (1.0 - p) / n as f64).sqrt()))
}

/// corr(F(σ_k), F(σ_l)) = ζ(σ_k + σ_l) / √(ζ(2σ_k) ζ(2σ_l)).
pub fn series_correlation(sigma_k: f64, sigma_l: f64) -> Result<f64> {
    if !(sigma_k > 0.5) || !(sigma_l > 0.5) {
        return Err(Error::domain(
            "series_correlation requires both points > 1/2".to_string(),
        ));
    }
    let (num, _) = zeta_sk(sigma_k + sigma_l, 0, -1.0)?;
    let (dk, _) = zeta_sk(2.0 * sigma_k, 0, -1.0)?;
    let (dl, _) = zeta_sk(2.0 * sigma_l, 0, -1.0)?;
    Ok(num / (dk * dl).sqrt())
}

/// corr(1[X>0], 1[Y>0]) for a standard Gaussian pair with correlation ρ:
/// (2/π) arctan(ρ / √(1-ρ²)).
pub fn orthant_indicator_correlation(rho: f64) -> Result<f64> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain(format!(
            "orthant correlation requires |rho| < 1, got {rho}"
        )));
    }
    Ok(2.0 / std::f64::consts::PI * (rho / (1.0 - rho * rho).sqrt()).atan())
}

/// Signs of the path along the dyadic points σ_n = 1/2 + 2^-n, n <= R.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignStatistics {
    pub plus: usize,
    pub minus: usize,
    /// An exact zero was observed (probability-zero event).
    pub suspect: bool,
}

fn sign_adequacy(truncation: usize, r: usize) -> Result<()> {
    // The dyadic grid reaches scale index R; require the series to carry
    // at least 2^R terms so the finest step is not beyond the truncated
    // path's own resolution: R <= ceil(log2 N).
    let ceil_log2 = (usize::BITS - (truncation.max(2) - 1).leading_zeros()) as usize;
    if r < 1 {
        return Err(Error::domain("R must be >= 1".to_string()));
    }
    if r > ceil_log2 {
        return Err(Error::domain(format!(
            "R = {r} beyond truncation adequacy for N = {truncation} (max {ceil_log2})"
        )));
    }
    Ok(())
}

/// S_+(R), S_-(R) for one sampled path.
pub fn sign_statistics(coeffs: &[f64], r: usize) -> Result<SignStatistics> {
    sign_adequacy(coeffs.len(), r)?;
    let sigma_min = 0.5 + 0.5f64.powi(r as i32);
    let eval = PathEvaluator::from_coeffs(coeffs, sigma_min, 1.0);
    Ok(sign_statistics_with(&|s| eval.eval(s), r))
}

pub(crate) fn sign_statistics_with<F: Fn(f64) -> f64>(f: &F, r: usize) -> SignStatistics {
    let mut stats = SignStatistics {
        plus: 0,
        minus: 0,
        suspect: false,
    };
    for n in 1..=r {
        let v = f(0.5 + 0.5f64.powi(n as i32));
        if v > 0.0 {
            stats.plus += 1;
        } else if v < 0.0 {
            stats.minus += 1;
        } else {
            stats.suspect = true;
        }
    }
    stats
}

/// Streaming variant used by the trial drivers for large truncations.
pub(crate) fn sign_statistics_sampled(
    truncation: usize,
    r: usize,
    rng: &mut impl Rng,
) -> Result<SignStatistics> {
    sign_adequacy(truncation, r)?;
    let sigma_min = 0.5 + 0.5f64.powi(r as i32);
    let eval = PathEvaluator::sample(truncation, sigma_min, 1.0, rng);
    Ok(sign_statistics_with(&|s| eval.eval(s), r))
}

/// Sign statistics over independent trials, trial-ordered.
pub fn sign_statistics_trials(
    truncation: usize,
    r: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<SignStatistics>> {
    if trials < 1 {
        return Err(Error::domain("trials must be >= 1".to_string()));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            sign_statistics_sampled(truncation, r, &mut rng)
        })
        .collect()
}

/// Running S_+(n) for n = 1..=r_max per trial: one evaluator pass per path
/// serves every prefix, which is what the law-of-large-numbers band
/// diagnostics need.
pub fn sign_profile_trials(
    truncation: usize,
    r_max: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<Vec<usize>>> {
    sign_adequacy(truncation, r_max)?;
    if trials < 1 {
        return Err(Error::domain("trials must be >= 1".to_string()));
    }
    let sigma_min = 0.5 + 0.5f64.powi(r_max as i32);
    (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let eval = PathEvaluator::sample(truncation, sigma_min, 1.0, &mut rng);
            let mut plus = 0usize;
            let mut prefix = Vec::with_capacity(r_max);
            for n in 1..=r_max {
                if eval.eval(0.5 + 0.5f64.powi(n as i32)) > 0.0 {
                    plus += 1;
                }
                prefix.push(plus);
            }
            Ok(prefix)
        })
        .collect()
}

/// Monte Carlo estimate of corr(1[X>0], 1[Y>0]) over correlated standard
/// Gaussian pairs, with its standard error. Means and variances of the
/// indicators are known (1/2 and 1/4), so corr = 4 P(X>0, Y>0) - 1 and the
/// SE is binomial.
pub fn mc_orthant_correlation(rho: f64, pairs: usize, seed: u64) -> Result<(f64, f64)> {
    if !(rho.abs() < 1.0) {
        return Err(Error::domain(format!("|rho| < 1 required, got {rho}")));
    }
    if pairs < 2 {
        return Err(Error::domain("need at least 2 pairs".to_string()));
    }
    let mut rng = trial_rng(seed, 0);
    let mix = (1.0 - rho * rho).sqrt();
    let mut both = 0usize;
    for _ in 0..pairs {
        let x: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        let y = rho * x + mix * z;
        if x > 0.0 && y > 0.0 {
            both += 1;
        }
    }
    let p = both as f64 / pairs as f64;
    let se_p = (p * (1.0 - p) / pairs as f64).sqrt();
    Ok((4.0 * p - 1.0, 4.0 * se_p))
}

/// Monte Carlo estimate of corr(F(σ_k), F(σ_l)) over sampled truncated
/// paths, with the usual (1-r²)/√(n-1) standard error.
pub fn mc_series_correlation(
    sigma_k: f64,
    sigma_l: f64,
    truncation: usize,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if !(sigma_k > 0.5) || !(sigma_l > 0.5) {
        return Err(Error::domain("both points must exceed 1/2".to_string()));
    }
    if trials < 3 {
        return Err(Error::domain("need at least 3 trials".to_string()));
    }
    let wk: Vec<f64> = (1..=truncation).map(|n| (n as f64).powf(-sigma_k)).collect();
    let wl: Vec<f64> = (1..=truncation).map(|n| (n as f64).powf(-sigma_l)).collect();
    let sums: Vec<(f64, f64)> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, trial);
            let mut a = 0.0;
            let mut b = 0.0;
            for i in 0..truncation {
                let x: f64 = rng.sample(StandardNormal);
                a += x * wk[i];
                b += x * wl[i];
            }
            (a, b)
        })
        .collect();
    let n = trials as f64;
    let (ma, mb) = (
        sums.iter().map(|s| s.0).sum::<f64>() / n,
        sums.iter().map(|s| s.1).sum::<f64>() / n,
    );
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (a, b) in &sums {
        cov += (a - ma) * (b - mb);
        va += (a - ma).powi(2);
        vb += (b - mb).powi(2);
    }
    let r = cov / (va * vb).sqrt();
    let se = (1.0 - r * r) / (n - 1.0).sqrt();
    Ok((r, se))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_coefficients(64, &mut trial_rng(7, 3));
        let b = sample_coefficients(64, &mut trial_rng(7, 3));
        assert_eq!(a, b);
        let c = sample_coefficients(64, &mut trial_rng(7, 4));
        assert_ne!(a, c);
    }

    #[test]
    fn sample_moments_in_clt_bands() {
        let xs = sample_coefficients(1_000_000, &mut trial_rng(42, 0));
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() <= 3e-3, "mean {mean}");
        let var = xs.iter().map(|x| x * x).sum::<f64>() / xs.len() as f64 - mean * mean;
        assert!((var - 1.0).abs() <= 5e-3, "var {var}");
    }

    #[test]
    fn evaluate_path_basis_vectors() {
        let mut e1 = vec![0.0; 8];
        e1[0] = 1.0;
        for &s in &[0.6, 1.0, 2.5] {
            assert_eq!(evaluate_path(&e1, s).unwrap(), 1.0);
        }
        let mut e2 = vec![0.0; 8];
        e2[1] = 1.0;
        for &s in &[0.6, 1.0, 2.5] {
            assert!((evaluate_path(&e2, s).unwrap() - 2f64.powf(-s)).abs() < 1e-15);
        }
        assert!(evaluate_path(&e1, 0.5).is_err());
    }

    #[test]
    fn path_evaluator_matches_direct_sum() {
        let coeffs = sample_coefficients(5000, &mut trial_rng(1, 0));
        let eval = PathEvaluator::from_coeffs(&coeffs, 0.55, 1.4);
        for &s in &[0.55, 0.8, 1.1, 1.4] {
            let direct = evaluate_path(&coeffs, s).unwrap();
            assert!(
                (eval.eval(s) - direct).abs() < 1e-10 * (1.0 + direct.abs()),
                "sigma={s}"
            );
        }
    }

    #[test]
    fn path_variance_matches_exact_kernel() {
        // Var F_N(σ) = Σ_{n<=N} n^-2σ within 3 SE
        let n = 2000usize;
        let trials = 4000usize;
        let sigma = 0.7;
        let weights: Vec<f64> = (1..=n).map(|i| (i as f64).powf(-sigma)).collect();
        let mut values = Vec::with_capacity(trials);
        for t in 0..trials {
            let xs = sample_coefficients(n, &mut trial_rng(11, t as u64));
            let v: f64 = xs.iter().zip(&weights).map(|(x, w)| x * w).sum();
            values.push(v);
        }
        let mean = values.iter().sum::<f64>() / trials as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (trials - 1) as f64;
        let exact: f64 = weights.iter().map(|w| w * w).sum();
        // SE of a sample variance of Gaussians: exact·√(2/(n-1))
        let se = exact * (2.0 / (trials as f64 - 1.0)).sqrt();
        assert!((var - exact).abs() <= 3.0 * se, "var {var} vs {exact} (se {se})");
    }

    #[test]
    fn constant_path_has_no_zeros() {
        let mut coeffs = vec![0.0; 16];
        coeffs[0] = 1.0;
        let iv = RealInterval::new(0.6, 1.2).unwrap();
        let s = count_zeros(&coeffs, iv, 100, 1e-10).unwrap();
        assert_eq!(s.count, 0);
        assert_eq!(s.refined_count, 0);
        assert!(!s.suspect);
    }

    #[test]
    fn closed_form_single_zero_located() {
        // F(σ) = 1 - 2^(0.8-σ) has its only zero at σ = 0.8
        let mut coeffs = vec![0.0; 16];
        coeffs[0] = 1.0;
        coeffs[1] = -(2f64.powf(0.8));
        let iv = RealInterval::new(0.6, 1.2).unwrap();
        let s = count_zeros(&coeffs, iv, 200, 1e-12).unwrap();
        assert_eq!(s.count, 1);
        assert_eq!(s.refined_count, 1);
        assert_eq!(s.roots.len(), 1);
        assert!((s.roots[0] - 0.8).abs() <= 1e-10, "root at {}", s.roots[0]);
    }

    #[test]
    fn split_consistency_on_clean_paths() {
        let iv_full = RealInterval::new(0.6, 1.4).unwrap();
        let iv_a = RealInterval::new(0.6, 0.9).unwrap();
        let iv_b = RealInterval::new(0.9, 1.4).unwrap();
        let mut checked = 0;
        for trial in 0..40u64 {
            let coeffs = sample_coefficients(4000, &mut trial_rng(5, trial));
            let full = count_zeros(&coeffs, iv_full, 1600, 1e-11).unwrap();
            let a = count_zeros(&coeffs, iv_a, 700, 1e-11).unwrap();
            let b = count_zeros(&coeffs, iv_b, 1000, 1e-11).unwrap();
            if full.suspect || a.suspect || b.suspect {
                continue;
            }
            // skip paths with a root within tolerance of the split point
            if full.roots.iter().any(|r| (r - 0.9).abs() < 1e-6) {
                continue;
            }
            assert_eq!(full.count, a.count + b.count, "trial {trial}");
            checked += 1;
        }
        assert!(checked > 25, "too many suspect paths: {checked}");
    }

    #[test]
    fn run_trials_deterministic_across_thread_counts() {
        let cfg = SimulationConfig {
            truncation: 4000,
            interval: RealInterval::new(0.7, 1.0).unwrap(),
            grid_points: 800,
            bisection_tol: 1e-10,
            trials: 24,
            seed: 99,
        };
        let pool1 = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let pool4 = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let r1 = pool1.install(|| run_trials(&cfg)).unwrap();
        let r4 = pool4.install(|| run_trials(&cfg)).unwrap();
        assert_eq!(r1, r4);
    }

    #[test]
    fn truncation_rule_adequate_away_from_half() {
        let (n, ok) = choose_truncation(1.0).unwrap();
        assert!(ok, "rule should be satisfiable at T = 1");
        assert!(n <= TRUNCATION_CAP);
        // verify the inequality the chooser promises
        let (tail, _) = em_tail(2.0, 0, n as f64 + 1.0, 12);
        let kept = zeta_sk(2.0, 0, -1.0).unwrap().0 - tail;
        assert!(tail < 1e-6 * kept);
    }

    #[test]
    fn truncation_rule_reports_cap_near_half() {
        let (n, ok) = choose_truncation(0.6).unwrap();
        assert_eq!(n, TRUNCATION_CAP);
        assert!(!ok, "adequacy must be reported unmet at T = 0.6 under the cap");
    }

    #[test]
    fn moment_consistency_k1_equals_mean() {
        let cfg = SimulationConfig {
            truncation: 2000,
            interval: RealInterval::new(0.7, 1.0).unwrap(),
            grid_points: 600,
            bisection_tol: 1e-10,
            trials: 200,
            seed: 3,
        };
        let (m1, se) = estimate_moments(&cfg, 1).unwrap();
        let samples = run_trials(&cfg).unwrap();
        let mean = samples.iter().map(|s| s.refined_count as f64).sum::<f64>() / 200.0;
        assert!((m1 - mean).abs() < 1e-12);
        assert!(se.is_finite() && se >= 0.0);
    }

    #[test]
    fn moments_satisfy_lyapunov_inequality() {
        let cfg = SimulationConfig {
            truncation: 2000,
            interval: RealInterval::new(0.65, 1.0).unwrap(),
            grid_points: 800,
            bisection_tol: 1e-10,
            trials: 300,
            seed: 12,
        };
        let (m1, _) = estimate_moments(&cfg, 1).unwrap();
        let (m2, _) = estimate_moments(&cfg, 2).unwrap();
        let (m3, _) = estimate_moments(&cfg, 3).unwrap();
        assert!(m1 <= m2.sqrt() + 1e-12);
        assert!(m2.sqrt() <= m3.cbrt() * (1.0 + 1e-12));
    }

    #[test]
    fn tail_probability_monotone_in_lambda() {
        let cfg = SimulationConfig {
            truncation: 2000,
            interval: RealInterval::new(0.65, 1.0).unwrap(),
            grid_points: 800,
            bisection_tol: 1e-10,
            trials: 400,
            seed: 8,
        };
        let (p1, _) = tail_probability(&cfg, 0.25).unwrap();
        let (p2, _) = tail_probability(&cfg, 0.5).unwrap();
        let (p3, _) = tail_probability(&cfg, 1.0).unwrap();
        assert!(p1 <= 1.0 && p1 >= 0.0);
        assert!(p1 >= p2 && p2 >= p3);
    }

    #[test]
    fn series_correlation_basics() {
        assert!((series_correlation(0.8, 0.8).unwrap() - 1.0).abs() < 1e-12);
        let c = series_correlation(0.75, 1.0).unwrap();
        assert!(c > 0.0 && c < 1.0);
        assert!(series_correlation(0.5, 0.8).is_err());
    }

    #[test]
    fn orthant_correlation_closed_form() {
        assert_eq!(orthant_indicator_correlation(0.0).unwrap(), 0.0);
        let third = orthant_indicator_correlation(0.5).unwrap();
        assert!((third - 1.0 / 3.0).abs() < 1e-15);
        assert!(orthant_indicator_correlation(1.0).is_err());
        assert!(orthant_indicator_correlation(-1.2).is_err());
    }

    #[test]
    fn sign_statistics_sum_to_r() {
        let coeffs = sample_coefficients(1 << 12, &mut trial_rng(21, 0));
        let s = sign_statistics(&coeffs, 12).unwrap();
        assert_eq!(s.plus + s.minus, 12);
        assert!(!s.suspect);
    }

    #[test]
    fn sign_statistics_adequacy_gate() {
        let coeffs = vec![1.0; 1024];
        assert!(sign_statistics(&coeffs, 10).is_ok());
        assert!(matches!(
            sign_statistics(&coeffs, 11),
            Err(Error::Domain(_))
        ));
    }
}
