//! Riemann zeta machinery on the real axis s > 1: ζ, ζ', ζ'', the von
//! Mangoldt function, the Stieltjes constants, and (log ζ)''.
//!
//! Everything is ordinary f64 arithmetic with explicit truncation-error
//! bounds. Near s = 1 plain partial sums are useless, so ζ^(k) is summed by
//! Euler-Maclaurin applied to g(x) = (ln x)^k x^-s with the classical
//! remainder bound |R_q| <= |B_2q|/(2q)! ∫ |g^(2q)|; away from s = 1 the
//! series converges fast enough that partial sums plus an integral tail
//! bracket win.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::special::upper_gamma_int;
use crate::util::{ln_dd, Accumulator, Dd};

/// Crossover between the Euler-Maclaurin representation and plain partial
/// sums. Tunable; partial sums with a certified bracket need ~10^6 terms
/// per evaluation at s = 2, while Euler-Maclaurin stays at ~64 terms, so
/// the switch sits comfortably above where either route is viable.
pub const EM_CROSSOVER_S: f64 = 10.0;

/// B_2j for j = 1..=16 as (numerator, denominator).
const BERNOULLI: [(f64, f64); 16] = [
    (1.0, 6.0),
    (-1.0, 30.0),
    (1.0, 42.0),
    (-1.0, 30.0),
    (5.0, 66.0),
    (-691.0, 2730.0),
    (7.0, 6.0),
    (-3617.0, 510.0),
    (43867.0, 798.0),
    (-174611.0, 330.0),
    (854513.0, 138.0),
    (-236364091.0, 2730.0),
    (8553103.0, 6.0),
    (-23749461029.0, 870.0),
    (8615841276005.0, 14322.0),
    (-7709321041217.0, 510.0),
];

/// B_2j / (2j)! for j = 1..=16.
fn bernoulli_over_fact(j: usize) -> f64 {
    debug_assert!(
        (1..=BERNOULLI.len()).contains(&j),
        "Bernoulli table exhausted"
    );
    let (num, den) = BERNOULLI[j - 1];
    let mut fact = 1.0;
    for i in 2..=(2 * j) {
        fact *= i as f64;
    }
    num / (den * fact)
}

/// Value of ζ^(k)(s) together with a truncation-error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEvaluation {
    /// Real argument, > 1.
    pub s: f64,
    /// Derivative order, 0, 1 or 2.
    pub order: usize,
    pub value: f64,
    /// Bound on |value - ζ^(order)(s)| for the chosen truncation parameters
    /// (plus a small allowance for accumulated rounding).
    pub error_bound: f64,
}

const MAX_K: usize = 16;

/// Coefficient vectors of g^(m)(x) = x^(-s-m) Σ_j c_j (ln x)^j for
/// g(x) = (ln x)^k x^-s, advanced one derivative order per step.
struct DerivCoeffs {
    c: [f64; MAX_K + 1],
    k: usize,
    m: usize,
    s: f64,
}

impl DerivCoeffs {
    fn new(s: f64, k: usize) -> Self {
        assert!(k <= MAX_K);
        let mut c = [0.0; MAX_K + 1];
        c[k] = 1.0;
        DerivCoeffs { c, k, m: 0, s }
    }

    fn step(&mut self) {
        let factor = -self.s - self.m as f64;
        let mut next = [0.0; MAX_K + 1];
        for j in 0..=self.k {
            next[j] = factor * self.c[j]
                + if j + 1 <= self.k {
                    (j as f64 + 1.0) * self.c[j + 1]
                } else {
                    0.0
                };
        }
        self.c = next;
        self.m += 1;
    }

    /// g^(m)(x) at x = n given ln n.
    fn eval(&self, _n: f64, ln_n: f64) -> f64 {
        let mut poly = 0.0;
        for j in (0..=self.k).rev() {
            poly = poly * ln_n + self.c[j];
        }
        poly * (-(self.s + self.m as f64) * ln_n).exp()
    }

    /// Same in double-double; the correction terms reach ~10^4 for k near
    /// 10 while the target constants are ~10^-4, so f64 evaluation here
    /// would cost ten digits.
    fn eval_dd(&self, ln_n: Dd, inv_x_pow: f64) -> Dd {
        let mut poly = Dd::ZERO;
        for j in (0..=self.k).rev() {
            poly = poly.mul(ln_n).add_f64(self.c[j]);
        }
        poly.mul(Dd::from_f64(inv_x_pow))
    }

    /// Σ_j |c_j| ∫_n^∞ (ln x)^j x^(-s-m) dx, used for the remainder bound.
    fn abs_integral(&self, _n: f64, ln_n: f64) -> f64 {
        let b = self.s + self.m as f64 - 1.0;
        let mut total = 0.0;
        for j in 0..=self.k {
            if self.c[j] != 0.0 {
                total += self.c[j].abs() * upper_gamma_int(j, b * ln_n) / b.powi(j as i32 + 1);
            }
        }
        total
    }
}

/// Euler-Maclaurin tail Σ_{n>=n0} (ln n)^k n^-s for s > 1, with a certified
/// remainder bound. `q` correction terms are applied.
pub(crate) fn em_tail(s: f64, k: usize, n0: f64, q: usize) -> (f64, f64) {
    debug_assert!(s > 1.0 && n0 >= 2.0);
    let ln_n = n0.ln();
    // ∫_n0^∞ (ln x)^k x^-s dx
    let b = s - 1.0;
    let integral = upper_gamma_int(k, b * ln_n) / b.powi(k as i32 + 1);
    let g0 = ln_n.powi(k as i32) * (-s * ln_n).exp();
    let mut value = integral + 0.5 * g0;

    let mut coeffs = DerivCoeffs::new(s, k);
    for j in 1..=q {
        coeffs.step(); // to m = 2j - 1
        debug_assert_eq!(coeffs.m, 2 * j - 1);
        value -= bernoulli_over_fact(j) * coeffs.eval(n0, ln_n);
        coeffs.step(); // to m = 2j
    }
    debug_assert_eq!(coeffs.m, 2 * q);
    let bound = bernoulli_over_fact(q).abs() * coeffs.abs_integral(n0, ln_n);
    (value, bound)
}

/// S_k(s) = Σ_{n>=1} (ln n)^k n^-s via Euler-Maclaurin with N leading terms.
pub(crate) fn em_value_and_bound(s: f64, k: usize, n: usize, q: usize) -> (f64, f64) {
    let mut partial = Accumulator::new();
    if k == 0 {
        partial.add(1.0);
    }
    for i in 2..n {
        let ln_i = (i as f64).ln();
        partial.add(ln_i.powi(k as i32) * (-s * ln_i).exp());
    }
    let (tail, tail_bound) = em_tail(s, k, n as f64, q);
    let value = partial.value() + tail;
    // allowance for f64 rounding across the summation and tail formulas
    let rounding = 8.0 * f64::EPSILON * (partial.value().abs() + tail.abs());
    (value, tail_bound + rounding)
}

/// S_k(s) by plain partial sums with the integral tail bracket; effective
/// for s >= EM_CROSSOVER_S.
fn partial_sum_value_and_bound(s: f64, k: usize, target: f64) -> (f64, f64) {
    let mut n = 8usize;
    loop {
        let ln_n = (n as f64).ln();
        let g_n = ln_n.powi(k as i32) * (-s * ln_n).exp();
        if 0.5 * g_n <= target || n >= (1 << 22) {
            let mut partial = Accumulator::new();
            if k == 0 {
                partial.add(1.0);
            }
            for i in 2..n {
                let ln_i = (i as f64).ln();
                partial.add(ln_i.powi(k as i32) * (-s * ln_i).exp());
            }
            let b = s - 1.0;
            let integral = upper_gamma_int(k, b * ln_n) / b.powi(k as i32 + 1);
            let value = partial.value() + integral + 0.5 * g_n;
            let rounding = 8.0 * f64::EPSILON * value.abs();
            return (value, 0.5 * g_n + rounding);
        }
        n *= 2;
    }
}

/// Auto-mode absolute target: machine precision relative to the series'
/// leading scale (the n = 2 term dominates every S_k for large s).
fn auto_target(s: f64) -> f64 {
    (2f64.powf(-s) * 1e-13).max(1e-290)
}

/// S_k(s) = Σ (ln n)^k n^-s with an error bound. `target <= 0` asks for the
/// best the engine will do (near machine precision).
pub(crate) fn zeta_sk(s: f64, k: usize, target: f64) -> Result<(f64, f64)> {
    if !(s > 1.0) {
        return Err(Error::domain(format!("zeta requires s > 1, got {s}")));
    }
    if s >= EM_CROSSOVER_S {
        let eff = if target > 0.0 { target } else { auto_target(s) };
        let (value, bound) = partial_sum_value_and_bound(s, k, eff);
        if target > 0.0 && bound > target {
            return Err(Error::precision(format!(
                "partial-sum budget exhausted at s={s}, k={k}: bound {bound:.3e} > target {target:.3e}"
            )));
        }
        return Ok((value, bound));
    }
    let mut n = 64usize;
    let mut best = em_value_and_bound(s, k, n, 12);
    while target > 0.0 && best.1 > target && n < (1 << 16) {
        n *= 2;
        let cand = em_value_and_bound(s, k, n, 12);
        if cand.1 < best.1 {
            best = cand;
        }
    }
    if target > 0.0 && best.1 > target {
        return Err(Error::precision(format!(
            "Euler-Maclaurin budget exhausted at s={s}, k={k}: bound {:.3e} > target {target:.3e}",
            best.1
        )));
    }
    Ok(best)
}

/// All three orders in one pass, at near machine precision. This is the
/// hot path for the Kac-Rice integrand.
pub(crate) fn zeta_all3(s: f64) -> Result<[(f64, f64); 3]> {
    if !(s > 1.0) {
        return Err(Error::domain(format!("zeta requires s > 1, got {s}")));
    }
    if s < EM_CROSSOVER_S {
        let n = 64usize;
        let mut partials = [Accumulator::new(), Accumulator::new(), Accumulator::new()];
        partials[0].add(1.0);
        for i in 2..n {
            let ln_i = (i as f64).ln();
            let w = (-s * ln_i).exp();
            partials[0].add(w);
            partials[1].add(ln_i * w);
            partials[2].add(ln_i * ln_i * w);
        }
        let mut out = [(0.0, 0.0); 3];
        for k in 0..3 {
            let (tail, tail_bound) = em_tail(s, k, n as f64, 12);
            let value = partials[k].value() + tail;
            out[k] = (value, tail_bound + 8.0 * f64::EPSILON * value.abs());
        }
        Ok(out)
    } else {
        let eff = auto_target(s);
        Ok([
            partial_sum_value_and_bound(s, 0, eff),
            partial_sum_value_and_bound(s, 1, eff),
            partial_sum_value_and_bound(s, 2, eff),
        ])
    }
}

/// ζ(s) for real s > 1 with error_bound <= target_abs_err.
pub fn zeta(s: f64, target_abs_err: f64) -> Result<ZetaEvaluation> {
    if !(target_abs_err > 0.0) {
        return Err(Error::domain("target_abs_err must be positive".to_string()));
    }
    let (value, error_bound) = zeta_sk(s, 0, target_abs_err)?;
    debug_assert!(value > 1.0 - error_bound);
    Ok(ZetaEvaluation {
        s,
        order: 0,
        value,
        error_bound,
    })
}

/// ζ^(k)(s) = (-1)^k Σ (ln n)^k n^-s for k in {1, 2}.
pub fn zeta_derivative(s: f64, k: usize, target_abs_err: f64) -> Result<ZetaEvaluation> {
    if k == 0 || k > 2 {
        return Err(Error::domain(format!(
            "derivative order must be 1 or 2, got {k}"
        )));
    }
    if !(target_abs_err > 0.0) {
        return Err(Error::domain("target_abs_err must be positive".to_string()));
    }
    let (value, error_bound) = zeta_sk(s, k, target_abs_err)?;
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(ZetaEvaluation {
        s,
        order: k,
        value: sign * value,
        error_bound,
    })
}

/// (log ζ)''(s) = ζ''(s)/ζ(s) - (ζ'(s)/ζ(s))², strictly positive for s > 1.
pub fn log_zeta_second_derivative(s: f64) -> Result<f64> {
    let [(a, da), (b, db), (c, dc)] = zeta_all3(s)?;
    // a = ζ, b = -ζ', c = ζ''
    let f = c / a - (b / a) * (b / a);
    let prop = dc / a + 2.0 * b.abs() / (a * a) * db + (c / (a * a) + 2.0 * b * b / (a * a * a)) * da;
    if !(f > 0.0) || prop > 0.5 * f {
        return Err(Error::precision(format!(
            "(log zeta)'' lost all significance at s={s}: value {f:.3e}, bound {prop:.3e}"
        )));
    }
    Ok(f)
}

/// Von Mangoldt Λ(n): ln p when n = p^m, else 0. Trial factorisation,
/// intended for n <= 10^8.
pub fn von_mangoldt(n: u64) -> f64 {
    assert!(n >= 1, "von_mangoldt requires n >= 1");
    if n == 1 {
        return 0.0;
    }
    let mut m = n;
    let mut p = 0u64;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            p = d;
            while m % d == 0 {
                m /= d;
            }
            break;
        }
        d += 1;
    }
    if p == 0 {
        // n itself is prime
        return (n as f64).ln();
    }
    if m == 1 {
        (p as f64).ln()
    } else {
        0.0
    }
}

/// Table of Stieltjes constants γ_0 .. γ_M.
#[derive(Debug, Clone)]
pub struct StieltjesTable {
    pub values: Vec<f64>,
    /// Absolute error bound valid for every entry.
    pub precision: f64,
}

impl StieltjesTable {
    pub fn gamma(&self, n: usize) -> f64 {
        self.values[n]
    }
}

/// γ_n = lim_m [Σ_{k<=m} (ln k)^n / k - (ln m)^(n+1)/(n+1)] by
/// Euler-Maclaurin at N = 63 with double-double accumulation: the partial
/// sum and the (ln N)^(n+1) term cancel to ~10 digits for n near 10, which
/// plain f64 cannot survive.
fn stieltjes_single(n: usize, q: usize) -> (f64, f64) {
    const N: u32 = 63;
    let mut partial = Dd::ZERO;
    for k in 2..N {
        let t = ln_dd(k).powi(n).div_f64(k as f64);
        partial = partial.add(t);
    }
    if n == 0 {
        partial = partial.add_f64(1.0); // k = 1 term
    }
    let ln_n_dd = ln_dd(N);
    let log_power = ln_n_dd.powi(n + 1).div_f64(n as f64 + 1.0);
    let mut value = partial.sub(log_power);

    let nf = N as f64;
    let ln_n = ln_n_dd.to_f64();
    value = value.add(ln_n_dd.powi(n).div_f64(2.0 * nf)); // g(N)/2
    let mut coeffs = DerivCoeffs::new(1.0, n);
    let mut correction_scale = 0.0;
    for j in 1..=q {
        coeffs.step(); // to m = 2j - 1
        let term = coeffs
            .eval_dd(ln_n_dd, nf.powi(-(2 * j as i32)))
            .mul(Dd::from_f64(bernoulli_over_fact(j)));
        value = value.sub(term);
        correction_scale += term.to_f64().abs();
        coeffs.step(); // to m = 2j
    }
    // truncation remainder, plus rounding of the f64 factors (N^-2j, B/(2j)!)
    let bound = bernoulli_over_fact(q).abs() * coeffs.abs_integral(nf, ln_n)
        + 4.0 * f64::EPSILON * correction_scale
        + 1e-26 * log_power.to_f64().abs()
        + 1e-30;
    (value.to_f64(), bound)
}

/// Stieltjes constants γ_0..γ_M, each within `precision`.
pub fn stieltjes_constants(m_max: usize, precision: f64) -> Result<StieltjesTable> {
    if m_max > MAX_K {
        return Err(Error::precision(format!(
            "Stieltjes table capped at M = {MAX_K}, requested {m_max}"
        )));
    }
    if !(precision > 0.0) {
        return Err(Error::domain("precision must be positive".to_string()));
    }
    let mut values = Vec::with_capacity(m_max + 1);
    let mut worst = 0.0f64;
    for n in 0..=m_max {
        let mut best = stieltjes_single(n, 12);
        for q in [14, 16] {
            let cand = stieltjes_single(n, q);
            if cand.1 < best.1 {
                best = cand;
            }
        }
        if best.1 > precision {
            return Err(Error::precision(format!(
                "gamma_{n} reachable only to {:.3e}, requested {precision:.3e}",
                best.1
            )));
        }
        worst = worst.max(best.1);
        values.push(best.0);
    }
    let table = StieltjesTable {
        values,
        precision: worst.max(1e-30),
    };
    // sanity anchor
    if !(table.values[0] > 0.577 && table.values[0] < 0.578) {
        return Err(Error::precision(format!(
            "gamma_0 sanity anchor violated: {}",
            table.values[0]
        )));
    }
    Ok(table)
}

/// Shared table γ_0..γ_10 at 1e-12, computed once. These feed the series
/// pipeline and must dominate downstream tolerances.
pub fn cached_stieltjes() -> &'static StieltjesTable {
    static TABLE: OnceLock<StieltjesTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        stieltjes_constants(10, 1e-12).expect("startup Stieltjes table must be computable")
    })
}
