//! Generalised frequency sets P = {p_1 < p_2 < ...} with counting function
//! π(x) ~ x (log x)^α: ζ_α and its derivatives, the generalised expected-
//! zero quadrature, the J(γ, σ) integral, regime classification, and the
//! weighted ζ_* variants (τ-weighted integers in particular).

use std::sync::OnceLock;

use crate::compress::ExpSumCompressor;
use crate::error::{Error, Result};
use crate::expected::{expected_zero_count_kernel, kac_from_kernel_value, LogKernel, RealInterval};
use crate::quad::QuadratureResult;
use crate::special::{exp_integral_e1, upper_incomplete_gamma};
use crate::zeta::{zeta_sk, ZetaEvaluation};

pub use crate::special::gamma_function;

/// Hard cap for [`generate_primes`].
pub const PRIME_LIMIT_CAP: u64 = 1_000_000_000;

/// All primes <= limit (segmented sieve of Eratosthenes).
pub fn generate_primes(limit: u64) -> Result<Vec<u64>> {
    if limit > PRIME_LIMIT_CAP {
        return Err(Error::resource(format!(
            "prime sieve capped at {PRIME_LIMIT_CAP}, requested {limit}"
        )));
    }
    if limit < 2 {
        return Ok(Vec::new());
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    // base sieve
    let mut base_is_comp = vec![false; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if !base_is_comp[i as usize] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                base_is_comp[j as usize] = true;
                j += i;
            }
        }
    }
    let mut primes = Vec::with_capacity((limit as f64 / (limit as f64).ln().max(2.0) * 1.2) as usize);
    const SEGMENT: u64 = 1 << 20;
    let mut seg = vec![false; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        seg[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = ((lo + p - 1) / p) * p;
            if start < p * p {
                start = p * p;
            }
            let mut j = start;
            while j <= hi {
                seg[(j - lo) as usize] = true;
                j += p;
            }
        }
        for i in 0..len {
            if !seg[i] {
                primes.push(lo + i as u64);
            }
        }
        lo = hi + 1;
    }
    Ok(primes)
}

fn ln_primes_to_1e6() -> &'static [f64] {
    static CACHE: OnceLock<Vec<f64>> = OnceLock::new();
    CACHE.get_or_init(|| {
        generate_primes(1_000_000)
            .expect("sieve to 1e6")
            .iter()
            .map(|&p| (p as f64).ln())
            .collect()
    })
}

/// Asymptotic class of E N_α(T, ∞) as T -> 1/2⁺.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Supercritical,
    Critical,
    Subcritical,
}

/// Predicted leading behaviour of E N_α(T, ∞) as T -> 1/2⁺.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimePrediction {
    pub regime: Regime,
    pub leading_form: String,
    /// √(1+α)/(2π) above criticality, 1/π at it, unknown below (the
    /// constant depends on the set and is only computable per set).
    pub leading_constant: Option<f64>,
}

pub fn regime_prediction(alpha: f64) -> RegimePrediction {
    if alpha > -1.0 {
        RegimePrediction {
            regime: Regime::Supercritical,
            leading_form: "sqrt(1+alpha)/(2*pi) * log(1/(T-1/2))".to_string(),
            leading_constant: Some((1.0 + alpha).sqrt() / (2.0 * std::f64::consts::PI)),
        }
    } else if alpha == -1.0 {
        RegimePrediction {
            regime: Regime::Critical,
            leading_form: "(1/pi) * sqrt(log(1/(T-1/2)))".to_string(),
            leading_constant: Some(1.0 / std::f64::consts::PI),
        }
    } else {
        RegimePrediction {
            regime: Regime::Subcritical,
            leading_form: "constant c depending on the set".to_string(),
            leading_constant: None,
        }
    }
}

/// J(γ, σ) = ∫_2^∞ (log x)^γ x^-2σ dx, by the substitution
/// u = (2σ-1) log x: Γ(γ+1, (2σ-1) log 2) / (2σ-1)^(γ+1).
pub fn integral_j(gamma: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.5) {
        return Err(Error::domain(format!(
            "integral_j requires sigma > 1/2, got {sigma}"
        )));
    }
    let a = 2.0 * sigma - 1.0;
    let y = a * 2f64.ln();
    Ok(upper_incomplete_gamma(gamma + 1.0, y)? * a.powf(-(gamma + 1.0)))
}

/// Description of the frequency set backing a generalised series.
#[derive(Debug, Clone)]
enum Frequencies {
    Integers,
    Primes,
    /// P = ℕ with weights a_n² = τ(n); ζ_* = ζ², π_* ~ x log x (α = 1).
    TauWeighted,
    Explicit {
        ln_points: Vec<f64>,
        weights_sq: Vec<f64>,
        alpha: f64,
    },
    /// Synthetic set with π(x) = x (log x)^α exactly (α >= 0): the first
    /// 10^5 points are materialised, the rest enters through the measure
    /// d[x (log x)^α].
    Model {
        alpha: f64,
        ln_points: Vec<f64>,
        ln_cut: f64,
    },
}

#[derive(Debug, Clone)]
pub struct FrequencySet {
    inner: Frequencies,
}

const MODEL_POINTS: usize = 100_000;

impl FrequencySet {
    pub fn integers() -> Self {
        FrequencySet {
            inner: Frequencies::Integers,
        }
    }

    pub fn primes() -> Self {
        FrequencySet {
            inner: Frequencies::Primes,
        }
    }

    pub fn tau_weighted() -> Self {
        FrequencySet {
            inner: Frequencies::TauWeighted,
        }
    }

    /// Explicit finite list with optional weights and a declared regularity
    /// exponent. Elements must be strictly increasing with p_1 >= 1.
    pub fn explicit(points: Vec<f64>, weights: Option<Vec<f64>>, alpha: f64) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::domain("explicit set needs at least 2 elements".to_string()));
        }
        if points[0] < 1.0 {
            return Err(Error::domain("explicit set requires p_1 >= 1".to_string()));
        }
        for w in points.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::domain(
                    "explicit set must be strictly increasing".to_string(),
                ));
            }
        }
        let weights_sq = match weights {
            Some(ws) => {
                if ws.len() != points.len() {
                    return Err(Error::domain("one weight per element required".to_string()));
                }
                if ws.iter().any(|&w| !(w >= 0.0)) {
                    return Err(Error::domain("weights must be >= 0".to_string()));
                }
                ws.iter().map(|w| w * w).collect()
            }
            None => vec![1.0; points.len()],
        };
        Ok(FrequencySet {
            inner: Frequencies::Explicit {
                ln_points: points.iter().map(|p| p.ln()).collect(),
                weights_sq,
                alpha,
            },
        })
    }

    /// Synthetic set with counting function exactly x (log x)^α, α >= 0.
    pub fn model(alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) {
            return Err(Error::domain(
                "model sets support alpha >= 0; use power_log_list for subcritical sets"
                    .to_string(),
            ));
        }
        let mut ln_points = Vec::with_capacity(MODEL_POINTS);
        for n in 1..=MODEL_POINTS {
            ln_points.push(invert_counting(n as f64, alpha).ln());
        }
        let ln_cut = *ln_points.last().unwrap();
        Ok(FrequencySet {
            inner: Frequencies::Model {
                alpha,
                ln_points,
                ln_cut,
            },
        })
    }

    /// Subcritical generator p_n = n (log(n+2))^-α for α < -1, declared
    /// with that α.
    pub fn power_log_list(alpha: f64, count: usize) -> Result<Self> {
        if !(alpha < -1.0) {
            return Err(Error::domain("power_log_list is for alpha < -1".to_string()));
        }
        let points: Vec<f64> = (1..=count.max(2))
            .map(|n| n as f64 * ((n as f64 + 2.0).ln()).powf(-alpha))
            .collect();
        Self::explicit(points, None, alpha)
    }

    /// Declared regularity exponent of the (weighted) counting function.
    pub fn alpha(&self) -> f64 {
        match &self.inner {
            Frequencies::Integers => 0.0,
            Frequencies::Primes => -1.0,
            Frequencies::TauWeighted => 1.0, // π_*(x) = Σ τ(n) ~ x log x
            Frequencies::Explicit { alpha, .. } => *alpha,
            Frequencies::Model { alpha, .. } => *alpha,
        }
    }

    pub fn kind(&self) -> &'static str {
        match &self.inner {
            Frequencies::Integers => "integers",
            Frequencies::Primes => "primes",
            Frequencies::TauWeighted => "tau-weighted",
            Frequencies::Explicit { .. } => "explicit-list",
            Frequencies::Model { .. } => "model",
        }
    }

    /// First `count` elements of the set.
    pub fn elements(&self, count: usize) -> Result<Vec<f64>> {
        match &self.inner {
            Frequencies::Integers | Frequencies::TauWeighted => {
                Ok((1..=count).map(|n| n as f64).collect())
            }
            Frequencies::Primes => {
                // crude overshoot of the count-th prime
                let bound = if count < 6 {
                    13.0
                } else {
                    let n = count as f64;
                    n * (n.ln() + n.ln().ln()) * 1.2
                };
                let primes = generate_primes(bound as u64)?;
                if primes.len() < count {
                    return Err(Error::resource(format!("could not enumerate {count} primes")));
                }
                Ok(primes[..count].iter().map(|&p| p as f64).collect())
            }
            Frequencies::Explicit { ln_points, .. } => {
                if count > ln_points.len() {
                    return Err(Error::precision(format!(
                        "explicit list has {} elements, {count} requested",
                        ln_points.len()
                    )));
                }
                Ok(ln_points[..count].iter().map(|l| l.exp()).collect())
            }
            Frequencies::Model { ln_points, .. } => {
                if count > ln_points.len() {
                    return Err(Error::precision(format!(
                        "model set materialises {} elements, {count} requested",
                        ln_points.len()
                    )));
                }
                Ok(ln_points[..count].iter().map(|l| l.exp()).collect())
            }
        }
    }

    /// Least-squares fit of the list against λ x (log x)^α: returns
    /// (λ̂, max relative residual over the upper half). Reported as a
    /// goodness-of-fit diagnostic, never asserted.
    pub fn counting_fit(&self) -> Option<(f64, f64)> {
        let (ln_points, alpha) = match &self.inner {
            Frequencies::Explicit {
                ln_points, alpha, ..
            } => (ln_points, *alpha),
            Frequencies::Model {
                ln_points, alpha, ..
            } => (ln_points, *alpha),
            _ => return None,
        };
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, &lp) in ln_points.iter().enumerate() {
            let model = lp.exp() * lp.powf(alpha);
            num += (i as f64 + 1.0) * model;
            den += model * model;
        }
        let lambda = num / den;
        let mut worst: f64 = 0.0;
        for (i, &lp) in ln_points.iter().enumerate().skip(ln_points.len() / 2) {
            let model = lambda * lp.exp() * lp.powf(alpha);
            worst = worst.max(((i as f64 + 1.0) - model).abs() / (i as f64 + 1.0));
        }
        Some((lambda, worst))
    }
}

/// Solve p (ln p)^α = n for p > 1 by bisection.
fn invert_counting(n: f64, alpha: f64) -> f64 {
    let f = |p: f64| p * p.ln().powf(alpha) - n;
    let mut lo = 1.0 + 1e-12;
    let mut hi = (n + 3.0) * 4.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

// ---------------------------------------------------------------------------
// kernels

/// Sums S_k(u) = Σ w (ln p)^k p^-u over a finite point list, compressed for
/// small u and direct with early exit for large u.
struct PointSums {
    ln_points: Vec<f64>,
    weights_sq: Vec<f64>,
    comp: Option<ExpSumCompressor>,
}

const COMPRESS_BELOW_U: f64 = 3.0;

impl PointSums {
    fn new(ln_points: Vec<f64>, weights_sq: Vec<f64>, u_lo: f64) -> Self {
        let comp = if u_lo < COMPRESS_BELOW_U {
            Some(ExpSumCompressor::from_points(
                &ln_points,
                &weights_sq,
                u_lo,
                COMPRESS_BELOW_U + 0.1,
            ))
        } else {
            None
        };
        PointSums {
            ln_points,
            weights_sq,
            comp,
        }
    }

    fn eval3(&self, u: f64) -> [f64; 3] {
        if u < COMPRESS_BELOW_U {
            if let Some(c) = &self.comp {
                return [c.eval(u, 0), c.eval(u, 1), c.eval(u, 2)];
            }
        }
        let mut out = [0.0; 3];
        for (&t, &w) in self.ln_points.iter().zip(&self.weights_sq) {
            let term = w * (-u * t).exp();
            out[0] += term;
            out[1] += term * t;
            out[2] += term * t * t;
            // ascending t with positive weights: once terms stop mattering,
            // the rest matter even less
            if term * (1.0 + t + t * t) < 1e-18 * (out[0] + out[1] + out[2]) {
                break;
            }
        }
        out
    }

    /// Var[t] under the head weights w p^-u, computed two-pass around the
    /// head mean. At large u the naive S2/S0 - (S1/S0)² cancels
    /// catastrophically (the variance decays like e^(-u gap) while the raw
    /// moments stay O(1) relative to each other); centring avoids that.
    /// Exponents are shifted by the first point so nothing underflows.
    fn centered_head_variance(&self, u: f64) -> (f64, f64) {
        let t0 = self.ln_points[0];
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for (&t, &w) in self.ln_points.iter().zip(&self.weights_sq) {
            let rel = w * (-u * (t - t0)).exp();
            s0 += rel;
            s1 += rel * t;
            if rel * (1.0 + t) < 1e-22 * (s0 + s1) {
                break;
            }
        }
        let mu = s1 / s0;
        let mut sc = 0.0;
        for (&t, &w) in self.ln_points.iter().zip(&self.weights_sq) {
            let rel = w * (-u * (t - t0)).exp();
            let d = t - mu;
            sc += rel * d * d;
            if rel * (1.0 + d * d) < 1e-22 * (s0 + sc) {
                break;
            }
        }
        (mu, sc / s0)
    }
}

/// ∫_X^∞ (ln x)^m x^-u dx for integer m >= -2 (closed forms via the upper
/// incomplete gamma / E1).
fn log_power_tail(m: i32, u: f64, ln_x: f64) -> Result<f64> {
    let a = u - 1.0;
    debug_assert!(a > 0.0);
    let y = a * ln_x;
    Ok(match m {
        -2 => {
            // ∫ e^-at / t² dt = e^-aT/T - a E1(aT)
            (-y).exp() / ln_x - a * exp_integral_e1(y)?
        }
        -1 => exp_integral_e1(y)?,
        m if m >= 0 => crate::special::upper_gamma_int(m as usize, y) / a.powi(m + 1),
        _ => return Err(Error::domain(format!("unsupported tail exponent {m}"))),
    })
}

/// ∫_X^∞ (ln x)^γ x^-u dx for real γ.
fn log_power_tail_real(gamma: f64, u: f64, ln_x: f64) -> Result<f64> {
    let a = u - 1.0;
    let y = a * ln_x;
    Ok(upper_incomplete_gamma(gamma + 1.0, y)? * a.powf(-(gamma + 1.0)))
}

enum SetKernel {
    Zeta,
    Tau,
    Primes(PointSums),
    Model {
        sums: PointSums,
        alpha: f64,
        ln_cut: f64,
    },
    Explicit {
        sums: PointSums,
        alpha: f64,
        ln_cut: f64,
        tail_weight: f64,
    },
}

impl SetKernel {
    fn for_set(set: &FrequencySet, u_lo: f64) -> SetKernel {
        match &set.inner {
            Frequencies::Integers => SetKernel::Zeta,
            Frequencies::TauWeighted => SetKernel::Tau,
            Frequencies::Primes => {
                let ln_points = ln_primes_to_1e6().to_vec();
                let n = ln_points.len();
                SetKernel::Primes(PointSums::new(ln_points, vec![1.0; n], u_lo))
            }
            Frequencies::Model {
                alpha,
                ln_points,
                ln_cut,
            } => SetKernel::Model {
                sums: PointSums::new(ln_points.clone(), vec![1.0; ln_points.len()], u_lo),
                alpha: *alpha,
                ln_cut: *ln_cut,
            },
            Frequencies::Explicit {
                ln_points,
                weights_sq,
                alpha,
            } => {
                let tail_weight = weights_sq[weights_sq.len() - weights_sq.len() / 10 - 1..]
                    .iter()
                    .sum::<f64>()
                    / (weights_sq.len() / 10 + 1) as f64;
                SetKernel::Explicit {
                    sums: PointSums::new(ln_points.clone(), weights_sq.clone(), u_lo),
                    alpha: *alpha,
                    ln_cut: *ln_points.last().unwrap(),
                    tail_weight,
                }
            }
        }
    }

    fn head(&self) -> &PointSums {
        match self {
            SetKernel::Primes(sums) => sums,
            SetKernel::Model { sums, .. } => sums,
            SetKernel::Explicit { sums, .. } => sums,
            _ => unreachable!("ζ-backed kernels have no point list"),
        }
    }

    /// Tail moments [T_0, T_1, T_2](u) of the set's continuum model beyond
    /// the materialised points.
    fn tail3(&self, u: f64) -> Result<[f64; 3]> {
        let mut out = [0.0; 3];
        match self {
            SetKernel::Zeta | SetKernel::Tau => unreachable!("handled by log_second_derivative"),
            SetKernel::Primes(_) => {
                // li-density tail: dπ ≈ dx / ln x beyond X = 10^6
                let ln_x = 1_000_000f64.ln();
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += log_power_tail(k as i32 - 1, u, ln_x)?;
                }
            }
            SetKernel::Model { alpha, ln_cut, .. } => {
                // measure d[x (ln x)^α] = ((ln x)^α + α (ln x)^(α-1)) dx
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += log_power_tail_real(alpha + k as f64, u, *ln_cut)?
                        + alpha * log_power_tail_real(alpha + k as f64 - 1.0, u, *ln_cut)?;
                }
            }
            SetKernel::Explicit {
                alpha,
                ln_cut,
                tail_weight,
                ..
            } => {
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot += tail_weight
                        * (log_power_tail_real(alpha + k as f64, u, *ln_cut)?
                            + alpha * log_power_tail_real(alpha + k as f64 - 1.0, u, *ln_cut)?);
                }
            }
        }
        Ok(out)
    }

    /// [S_0, S_1, S_2](u) where S_k = Σ a_p² (ln p)^k p^-u, including the
    /// set's tail model beyond the materialised points.
    fn sums3(&self, u: f64) -> Result<[f64; 3]> {
        let mut out = self.head().eval3(u);
        let tail = self.tail3(u)?;
        for k in 0..3 {
            out[k] += tail[k];
        }
        Ok(out)
    }

    /// Var[ln p] under the weights a_p² p^-u, stable at every u.
    fn variance(&self, u: f64) -> Result<f64> {
        if u < COMPRESS_BELOW_U {
            let [a, b, c] = self.sums3(u)?;
            return Ok(c / a - (b / a) * (b / a));
        }
        let head = self.head();
        let (mu_h, var_h) = head.centered_head_variance(u);
        let t0 = head.ln_points[0];
        let head_abs = (-u * t0).exp();
        if head_abs == 0.0 {
            return Ok(var_h);
        }
        let [t0m, t1m, t2m] = self.tail3(u)?;
        // head absolute mass: rerun of the shifted first pass
        let mut s0_rel = 0.0;
        for (&t, &w) in head.ln_points.iter().zip(&head.weights_sq) {
            let rel = w * (-u * (t - t0)).exp();
            s0_rel += rel;
            if rel < 1e-22 * s0_rel {
                break;
            }
        }
        let s0_abs = s0_rel * head_abs;
        if !(t0m > 1e-14 * s0_abs) {
            return Ok(var_h);
        }
        let mu_t = t1m / t0m;
        let var_t = (t2m / t0m - mu_t * mu_t).max(0.0);
        let w_h = s0_abs / (s0_abs + t0m);
        let w_t = 1.0 - w_h;
        Ok(w_h * var_h + w_t * var_t + w_h * w_t * (mu_h - mu_t) * (mu_h - mu_t))
    }
}

impl LogKernel for SetKernel {
    fn log_second_derivative(&self, s: f64) -> Result<f64> {
        match self {
            SetKernel::Zeta => crate::zeta::log_zeta_second_derivative(s),
            SetKernel::Tau => {
                // ζ_* = ζ²: compute (log ζ²)'' through the square's own
                // derivatives; algebraically 2 (log ζ)''
                let [(z, _), (zp_abs, _), (zdd, _)] = crate::zeta::zeta_all3(s)?;
                let zp = -zp_abs;
                let sq = z * z;
                let sq_p = 2.0 * z * zp;
                let sq_pp = 2.0 * (zp * zp + z * zdd);
                let v = sq_pp / sq - (sq_p / sq) * (sq_p / sq);
                if !(v > 0.0) {
                    return Err(Error::precision(format!(
                        "tau-weighted kernel lost positivity at s={s}"
                    )));
                }
                Ok(v)
            }
            _ => {
                let v = self.variance(s)?;
                if !(v > 0.0) {
                    return Err(Error::precision(format!(
                        "set kernel lost positivity at s={s}"
                    )));
                }
                Ok(v)
            }
        }
    }

    fn far_tail_bound(&self, l: f64) -> Result<f64> {
        match self {
            SetKernel::Zeta => {
                let (z, _) = zeta_sk(l, 0, -1.0)?;
                Ok((z - 1.0) / std::f64::consts::PI)
            }
            SetKernel::Tau => {
                let (z, _) = zeta_sk(l, 0, -1.0)?;
                Ok(2f64.sqrt() * (z - 1.0) / std::f64::consts::PI)
            }
            _ => {
                // geometric estimate from the integrand's own decay rate
                let g0 = kac_from_kernel_value(self.log_second_derivative(2.0 * l)?);
                let g1 = kac_from_kernel_value(self.log_second_derivative(2.0 * (l + 1.0))?);
                if g1 <= 0.0 || g1 >= g0 {
                    return Ok(g0.max(g1));
                }
                let rate = (g0 / g1).ln();
                Ok(g0 / rate)
            }
        }
    }
}

/// ζ_α^(k)(s): k-th derivative of Σ_p a_p² p^-s for the set (a_p = 1 when
/// unweighted), with an error bound. For primes the bound is the
/// Rosser-Schoenfeld bracket of the unsieved tail; for declared-α sets it
/// is the tail model itself, reported as an estimate.
pub fn zeta_alpha(s: f64, set: &FrequencySet, k: usize, tol: f64) -> Result<ZetaEvaluation> {
    if !(s > 1.0) {
        return Err(Error::domain(format!("zeta_alpha requires s > 1, got {s}")));
    }
    if k > 2 {
        return Err(Error::domain("derivative order must be 0, 1 or 2".to_string()));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("tolerance must be positive".to_string()));
    }
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    match &set.inner {
        Frequencies::Integers => {
            let (value, bound) = zeta_sk(s, k, tol)?;
            Ok(ZetaEvaluation {
                s,
                order: k,
                value: sign * value,
                error_bound: bound,
            })
        }
        Frequencies::TauWeighted => {
            let sub_tol = (tol / 8.0).min(1e-11);
            let (z, dz) = zeta_sk(s, 0, sub_tol)?;
            let (zp, dzp) = zeta_sk(s, 1, sub_tol)?; // |ζ'|
            let (zdd, dzdd) = zeta_sk(s, 2, sub_tol)?;
            let (value, bound) = match k {
                0 => (z * z, 2.0 * z * dz),
                1 => (-2.0 * z * zp, 2.0 * (z * dzp + zp * dz)),
                _ => (
                    2.0 * (zp * zp + z * zdd),
                    2.0 * (2.0 * zp * dzp + z * dzdd + zdd * dz),
                ),
            };
            if bound > tol {
                return Err(Error::precision(format!(
                    "tau-weighted bound {bound:.3e} exceeds target {tol:.3e}"
                )));
            }
            Ok(ZetaEvaluation {
                s,
                order: k,
                value,
                error_bound: bound,
            })
        }
        Frequencies::Primes => prime_zeta_eval(s, k, tol),
        Frequencies::Model { .. } | Frequencies::Explicit { .. } => {
            let kernel = SetKernel::for_set(set, s);
            let sums = kernel.sums3(s)?;
            // the tail model is an estimate; report it (scaled) as the bound
            let head_only = match &kernel {
                SetKernel::Model { sums, .. } | SetKernel::Explicit { sums, .. } => {
                    sums.eval3(s)[k]
                }
                _ => unreachable!(),
            };
            let tail = (sums[k] - head_only).abs();
            let bound = 0.5 * tail + 8.0 * f64::EPSILON * sums[k].abs();
            if bound > tol {
                return Err(Error::precision(format!(
                    "list too short for target {tol:.3e}: tail estimate {tail:.3e}"
                )));
            }
            Ok(ZetaEvaluation {
                s,
                order: k,
                value: sign * sums[k],
                error_bound: bound,
            })
        }
    }
}

/// Prime-zeta style evaluation: sieve to an s-dependent cutoff, li-density
/// tail, Rosser-Schoenfeld bracket as the certified error.
fn prime_zeta_eval(s: f64, k: usize, tol: f64) -> Result<ZetaEvaluation> {
    const RS_HI: f64 = 1.25506;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    // pick the cutoff from the bracket width, with π(X) itself bracketed
    let mut x = 100_000f64;
    let cutoff = loop {
        let ln_x = x.ln();
        let pi_hi = RS_HI * x / ln_x;
        let pi_lo = x / ln_x;
        let t_hi = RS_HI * tail_pieces(s, k, ln_x)? - pi_lo * ln_x.powi(k as i32) * (-s * ln_x).exp();
        let t_lo = tail_pieces(s, k, ln_x)? - pi_hi * ln_x.powi(k as i32) * (-s * ln_x).exp();
        if t_hi - t_lo <= tol || x >= 1e8 {
            if t_hi - t_lo > tol {
                return Err(Error::precision(format!(
                    "prime tail bracket {:.3e} exceeds target {tol:.3e} at the sieve cap",
                    t_hi - t_lo
                )));
            }
            break x;
        }
        x *= 10.0;
    };
    let primes = generate_primes(cutoff as u64)?;
    let ln_x = cutoff.ln();
    let mut head = 0.0;
    for &p in &primes {
        let t = (p as f64).ln();
        head += t.powi(k as i32) * (-s * t).exp();
    }
    let li_tail = log_power_tail(k as i32 - 1, s, ln_x)?;
    let pi_x = primes.len() as f64;
    let exact_term = pi_x * ln_x.powi(k as i32) * (-s * ln_x).exp();
    let t_hi = RS_HI * tail_pieces(s, k, ln_x)? - exact_term;
    let t_lo = tail_pieces(s, k, ln_x)? - exact_term;
    let bound = (t_hi - li_tail).abs().max((li_tail - t_lo).abs()) + 8.0 * f64::EPSILON * head;
    Ok(ZetaEvaluation {
        s,
        order: k,
        value: sign * (head + li_tail),
        error_bound: bound,
    })
}

/// ∫_X^∞ (x/ln x) (s (ln x)^k - k (ln x)^(k-1)) x^(-s-1) dx
///  = s T(k-1) - k T(k-2) with T(m) = ∫ (ln x)^m x^-s dx.
fn tail_pieces(s: f64, k: usize, ln_x: f64) -> Result<f64> {
    let a = s * log_power_tail(k as i32 - 1, s, ln_x)?;
    let b = if k > 0 {
        k as f64 * log_power_tail(k as i32 - 2, s, ln_x)?
    } else {
        0.0
    };
    Ok(a - b)
}

/// Kac-Rice integrand for a generalised set: (1/π)√((log ζ_α)''(2σ)).
pub fn kac_integrand_alpha(sigma: f64, set: &FrequencySet) -> Result<f64> {
    if !(sigma > 0.5) {
        return Err(Error::domain(format!(
            "kac_integrand_alpha requires sigma > 1/2, got {sigma}"
        )));
    }
    let kernel = SetKernel::for_set(set, 2.0 * sigma);
    Ok(kac_from_kernel_value(
        kernel.log_second_derivative(2.0 * sigma)?,
    ))
}

/// E N_α(T, U) = (1/π) ∫ √((log ζ_α)''(2σ)) dσ with the same quadrature
/// contract as the base case.
pub fn expected_zero_count_alpha(
    interval: RealInterval,
    set: &FrequencySet,
    tol: f64,
) -> Result<QuadratureResult> {
    if matches!(set.inner, Frequencies::Primes | Frequencies::Model { .. })
        && interval.t - 0.5 < 1e-12
    {
        return Err(Error::domain(
            "set kernels are validated for T - 1/2 >= 1e-12".to_string(),
        ));
    }
    let kernel = SetKernel::for_set(set, 2.0 * interval.t);
    expected_zero_count_kernel(&kernel, interval, tol)
}
