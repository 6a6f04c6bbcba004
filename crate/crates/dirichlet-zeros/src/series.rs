//! Exact truncated power/Laurent series about s = 1 and the pipeline that
//! turns the Laurent expansion of ζ into the expansion coefficients c_n.
//!
//! The same code runs over three coefficient rings: f64 (fast numerics),
//! exact rationals, and polynomials in the Stieltjes constants over the
//! rationals ([`GammaPoly`]), which is what makes the c_2 identity checkable
//! symbolically rather than only in floating point.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::zeta::StieltjesTable;

fn rat_zero() -> BigRational {
    <BigRational as Zero>::zero()
}

fn rat_one() -> BigRational {
    <BigRational as One>::one()
}

/// Coefficient ring for [`TruncatedSeries`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when one exists in the ring.
    fn invert(&self) -> Option<Self>;
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn invert(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        rat_zero()
    }
    fn one() -> Self {
        rat_one()
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn invert(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

/// Polynomial with rational coefficients in the Stieltjes constants
/// γ_0, γ_1, ... (rendered g0, g1, ...). Monomials are exponent vectors.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GammaPoly {
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl GammaPoly {
    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !Zero::is_zero(&c) {
            terms.insert(Vec::new(), c);
        }
        GammaPoly { terms }
    }

    /// The single variable γ_i.
    pub fn gamma(i: usize) -> Self {
        let mut mono = vec![0u32; i + 1];
        mono[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(mono, rat_one());
        GammaPoly { terms }
    }

    fn insert(&mut self, mono: Vec<u32>, coef: BigRational) {
        if Zero::is_zero(&coef) {
            return;
        }
        let entry = self.terms.entry(mono).or_insert_with(rat_zero);
        *entry += coef;
        if Zero::is_zero(entry) {
            // re-fetch key to remove; cheap at these sizes
            let key = self
                .terms
                .iter()
                .find(|(_, v)| Zero::is_zero(*v))
                .map(|(k, _)| k.clone());
            if let Some(k) = key {
                self.terms.remove(&k);
            }
        }
    }

    /// Numeric evaluation at concrete γ values.
    pub fn eval(&self, gammas: &[f64]) -> f64 {
        let mut total = 0.0;
        for (mono, coef) in &self.terms {
            let mut term = coef.to_f64().expect("rational fits in f64");
            for (i, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    term *= gammas[i];
                }
            }
            total += term;
        }
        total
    }

    fn mono_degree(mono: &[u32]) -> u32 {
        mono.iter().sum()
    }

    /// Render as `(<integer-coefficient polynomial>)/(<D>*pi)`, the exact
    /// form `p_n / pi` with denominators cleared.
    pub fn format_over_pi(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        // least common denominator
        let mut lcd = BigInt::one();
        for coef in self.terms.values() {
            let d = coef.denom();
            let g = num_integer::gcd(lcd.clone(), d.clone());
            lcd = lcd / g * d;
        }
        let mut terms: Vec<(&Vec<u32>, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let scaled = c * BigRational::from_integer(lcd.clone());
                debug_assert!(scaled.is_integer());
                (m, scaled.to_integer())
            })
            .collect();
        terms.sort_by_key(|(m, _)| (Self::mono_degree(m), (*m).clone()));

        let mut body = String::new();
        for (idx, (mono, coef)) in terms.iter().enumerate() {
            let negative = coef.is_negative();
            let abs = coef.abs();
            if idx == 0 {
                if negative {
                    body.push('-');
                }
            } else {
                body.push_str(if negative { " - " } else { " + " });
            }
            let mono_str = render_monomial(mono);
            if mono_str.is_empty() {
                body.push_str(&abs.to_string());
            } else if abs.is_one() {
                body.push_str(&mono_str);
            } else {
                body.push_str(&format!("{abs}*{mono_str}"));
            }
        }
        if lcd.is_one() {
            format!("({body})/pi")
        } else {
            format!("({body})/({lcd}*pi)")
        }
    }
}

fn render_monomial(mono: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in mono.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("g{i}")),
            _ => parts.push(format!("g{i}^{e}")),
        }
    }
    parts.join("*")
}

impl Coeff for GammaPoly {
    fn zero() -> Self {
        GammaPoly::default()
    }
    fn one() -> Self {
        GammaPoly::constant(rat_one())
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        GammaPoly::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = GammaPoly::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut mono = vec![0u32; ma.len().max(mb.len())];
                for (i, &e) in ma.iter().enumerate() {
                    mono[i] += e;
                }
                for (i, &e) in mb.iter().enumerate() {
                    mono[i] += e;
                }
                while mono.last() == Some(&0) {
                    mono.pop();
                }
                out.insert(mono, ca * cb);
            }
        }
        out
    }
    fn neg(&self) -> Self {
        GammaPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn invert(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Vec::new()) {
                return Some(GammaPoly::constant(c.recip()));
            }
        }
        None
    }
}

/// Truncated Laurent series about s = 1: coefficients for powers
/// -pole_order ..= order_cap of (s - 1). Coefficients beyond order_cap are
/// unknown, never implicitly zero.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    pole_order: usize,
    order_cap: isize,
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn new(pole_order: usize, order_cap: isize, coeffs: Vec<C>) -> Self {
        assert_eq!(
            coeffs.len() as isize,
            order_cap + pole_order as isize + 1,
            "coefficient count must match the power range"
        );
        TruncatedSeries {
            pole_order,
            order_cap,
            coeffs,
        }
    }

    pub fn zero(order_cap: isize) -> Self {
        let len = (order_cap + 1).max(0) as usize;
        TruncatedSeries {
            pole_order: 0,
            order_cap,
            coeffs: vec![C::zero(); len],
        }
    }

    pub fn constant(c: C, order_cap: isize) -> Self {
        let mut s = Self::zero(order_cap);
        if order_cap >= 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(order_cap: isize) -> Self {
        Self::constant(C::one(), order_cap)
    }

    /// c · x^k
    pub fn monomial(c: C, power: isize, order_cap: isize) -> Self {
        let pole = (-power).max(0) as usize;
        let mut s = TruncatedSeries {
            pole_order: pole,
            order_cap,
            coeffs: vec![C::zero(); (order_cap + pole as isize + 1).max(0) as usize],
        };
        let idx = (power + pole as isize) as usize;
        s.coeffs[idx] = c;
        s
    }

    pub fn pole_order(&self) -> usize {
        self.pole_order
    }

    pub fn order_cap(&self) -> isize {
        self.order_cap
    }

    /// Coefficient of (s-1)^power. Powers below the pole are genuinely
    /// zero; powers above order_cap are unknown and asking for them is a
    /// logic error.
    pub fn coeff(&self, power: isize) -> C {
        assert!(power <= self.order_cap, "coefficient beyond order_cap");
        let idx = power + self.pole_order as isize;
        if idx < 0 {
            C::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    fn set_coeff(&mut self, power: isize, c: C) {
        let idx = (power + self.pole_order as isize) as usize;
        self.coeffs[idx] = c;
    }

    /// Drop known-zero leading coefficients so pole_order reflects an
    /// actual pole.
    pub fn normalize(mut self) -> Self {
        while self.pole_order > 0 && self.coeffs.first().map_or(false, C::is_zero) {
            self.coeffs.remove(0);
            self.pole_order -= 1;
        }
        self
    }

    pub fn truncate(mut self, order_cap: isize) -> Self {
        assert!(order_cap <= self.order_cap);
        self.coeffs
            .truncate((order_cap + self.pole_order as isize + 1).max(0) as usize);
        self.order_cap = order_cap;
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        let pole = self.pole_order.max(other.pole_order);
        let cap = self.order_cap.min(other.order_cap);
        let mut out = TruncatedSeries {
            pole_order: pole,
            order_cap: cap,
            coeffs: vec![C::zero(); (cap + pole as isize + 1).max(0) as usize],
        };
        for power in -(pole as isize)..=cap {
            let a = if power >= -(self.pole_order as isize) {
                self.coeff(power)
            } else {
                C::zero()
            };
            let b = if power >= -(other.pole_order as isize) {
                other.coeff(power)
            } else {
                C::zero()
            };
            out.set_coeff(power, a.add(&b));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&C::one().neg()))
    }

    pub fn scale(&self, c: &C) -> Self {
        TruncatedSeries {
            pole_order: self.pole_order,
            order_cap: self.order_cap,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Cauchy product. The result is known only where every contributing
    /// pair is known: order_cap = min(ca - pb, cb - pa), which reduces to
    /// min(ca, cb) for pole-free operands.
    pub fn mul(&self, other: &Self) -> Self {
        let pole = self.pole_order + other.pole_order;
        let cap = (self.order_cap - other.pole_order as isize)
            .min(other.order_cap - self.pole_order as isize);
        let mut out = TruncatedSeries {
            pole_order: pole,
            order_cap: cap,
            coeffs: vec![C::zero(); (cap + pole as isize + 1).max(0) as usize],
        };
        for pa in -(self.pole_order as isize)..=self.order_cap {
            if self.coeff(pa).is_zero() {
                continue;
            }
            for pb in -(other.pole_order as isize)..=other.order_cap {
                let p = pa + pb;
                if p > cap {
                    break;
                }
                let prod = self.coeff(pa).mul(&other.coeff(pb));
                let cur = out.coeff(p);
                out.set_coeff(p, cur.add(&prod));
            }
        }
        out
    }

    /// 1 / self. Requires an invertible leading coefficient; a zero leading
    /// coefficient after normalisation is a degeneracy.
    pub fn reciprocal(&self) -> Result<Self> {
        let s = self.clone().normalize();
        let p = s.pole_order as isize;
        let lead = if s.coeffs.is_empty() {
            C::zero()
        } else {
            s.coeffs[0].clone()
        };
        if lead.is_zero() {
            return Err(Error::degeneracy(
                "reciprocal of a series with zero leading coefficient".to_string(),
            ));
        }
        let inv_lead = lead.invert().ok_or_else(|| {
            Error::degeneracy("leading coefficient is not invertible in this ring".to_string())
        })?;
        // u_j = coefficient of x^(j - p); unit part u = lead (1 + ...)
        let m = (s.order_cap + p) as usize; // highest unit-part index
        let mut r = vec![C::zero(); m + 1];
        r[0] = inv_lead.clone();
        for n in 1..=m {
            let mut acc = C::zero();
            for i in 1..=n {
                let u_i = s.coeffs[i].clone();
                if u_i.is_zero() {
                    continue;
                }
                acc = acc.add(&u_i.mul(&r[n - i]));
            }
            r[n] = acc.mul(&inv_lead).neg();
        }
        // 1/s = x^p · Σ r_j x^j: valuation p, cap = original cap + 2p
        let cap = s.order_cap + 2 * p;
        let mut coeffs = vec![C::zero(); p as usize];
        coeffs.extend(r);
        Ok(TruncatedSeries {
            pole_order: 0,
            order_cap: cap,
            coeffs,
        })
    }

    /// d/ds, term by term.
    pub fn differentiate(&self) -> Self {
        let pole = if self.pole_order > 0 {
            self.pole_order + 1
        } else {
            0
        };
        let cap = self.order_cap - 1;
        let mut out = TruncatedSeries {
            pole_order: pole,
            order_cap: cap,
            coeffs: vec![C::zero(); (cap + pole as isize + 1).max(0) as usize],
        };
        for e in -(self.pole_order as isize)..=self.order_cap {
            if e == 0 {
                continue;
            }
            let scaled = self.coeff(e).mul(&C::from_ratio(e as i64, 1));
            out.set_coeff(e - 1, scaled);
        }
        out
    }

    /// Multiply by x^k (exponent shift).
    pub fn shift(&self, k: isize) -> Self {
        let new_low = -(self.pole_order as isize) + k;
        let pole = (-new_low).max(0) as usize;
        let cap = self.order_cap + k;
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + pole);
        for _ in 0..(new_low + pole as isize) {
            coeffs.push(C::zero());
        }
        coeffs.extend(self.coeffs.iter().cloned());
        TruncatedSeries {
            pole_order: pole,
            order_cap: cap,
            coeffs,
        }
    }

    /// Formal composition outer(inner); inner must be pole-free with zero
    /// constant term (inner = O(x)), outer pole-free.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.pole_order != 0 || inner.pole_order != 0 {
            return Err(Error::domain(
                "composition requires pole-free series".to_string(),
            ));
        }
        if inner.order_cap >= 0 && !inner.coeff(0).is_zero() {
            return Err(Error::domain(
                "inner series must have zero constant term".to_string(),
            ));
        }
        // valuation of inner (lowest known non-zero power)
        let mut val = None;
        for p in 1..=inner.order_cap {
            if !inner.coeff(p).is_zero() {
                val = Some(p);
                break;
            }
        }
        let v = val.unwrap_or(inner.order_cap.max(1));
        // the unknown outer tail O(z^(oc+1)) contributes O(x^(v(oc+1)))
        let cap = inner.order_cap.min(v * (self.order_cap + 1) - 1);
        let mut acc = TruncatedSeries::constant(self.coeff(self.order_cap), cap);
        for n in (0..self.order_cap).rev() {
            acc = acc.mul(&inner.clone().truncate(cap.min(inner.order_cap)));
            let mut with_const = acc;
            if cap >= 0 {
                let c = with_const.coeff(0).add(&self.coeff(n));
                with_const.set_coeff(0, c);
            }
            acc = with_const;
        }
        Ok(acc)
    }

    /// Square root of a series with constant term exactly one.
    pub fn sqrt(&self) -> Result<Self> {
        if self.pole_order != 0 || self.order_cap < 0 || self.coeff(0) != C::one() {
            return Err(Error::domain(
                "series sqrt requires constant term one".to_string(),
            ));
        }
        let cap = self.order_cap;
        let half = C::from_ratio(1, 2);
        let mut b = vec![C::zero(); cap as usize + 1];
        b[0] = C::one();
        for n in 1..=cap as usize {
            let mut acc = self.coeff(n as isize);
            for i in 1..n {
                acc = acc.sub(&b[i].mul(&b[n - i]));
            }
            b[n] = acc.mul(&half);
        }
        Ok(TruncatedSeries {
            pole_order: 0,
            order_cap: cap,
            coeffs: b,
        })
    }
}

impl TruncatedSeries<f64> {
    /// Numeric evaluation at x = s - 1 (Laurent part included).
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        // Horner over the regular part
        for p in (0..=self.order_cap).rev() {
            acc = acc * x + self.coeff(p);
        }
        for p in -(self.pole_order as isize)..0 {
            let c = self.coeff(p);
            if c != 0.0 {
                acc += c * x.powi(p as i32);
            }
        }
        acc
    }
}

/// ζ as a truncated Laurent series about s = 1 from a table of Stieltjes
/// constants: 1/(s-1) + Σ (-1)^n γ_n/n! (s-1)^n.
fn zeta_laurent<C: Coeff>(gammas: &[C], order_cap: usize) -> TruncatedSeries<C> {
    let mut coeffs = Vec::with_capacity(order_cap + 2);
    coeffs.push(C::one()); // 1/(s-1)
    let mut fact = 1i64;
    for n in 0..=order_cap {
        if n > 0 {
            fact *= n as i64;
        }
        let sign = if n % 2 == 0 { 1 } else { -1 };
        coeffs.push(gammas[n].mul(&C::from_ratio(sign, fact)));
    }
    TruncatedSeries::new(1, order_cap as isize, coeffs)
}

/// A(s) with (log ζ)''(s) = (1 + A(s))/(s-1)²: Laurent of ζ → reciprocal →
/// multiply by ζ' → differentiate → subtract the double pole. The result
/// satisfies A(1) = A'(1) = 0 exactly.
pub fn derive_a_series_generic<C: Coeff>(
    gammas: &[C],
    order_cap: usize,
) -> Result<TruncatedSeries<C>> {
    if order_cap > 16 {
        return Err(Error::domain("order_cap capped at 16".to_string()));
    }
    if order_cap < 2 {
        return Err(Error::domain("order_cap must be at least 2".to_string()));
    }
    if gammas.len() < order_cap + 1 {
        return Err(Error::precision(format!(
            "need {} Stieltjes entries, have {}",
            order_cap + 1,
            gammas.len()
        )));
    }
    let zeta = zeta_laurent(gammas, order_cap);
    let zeta_prime = zeta.differentiate();
    let inv_zeta = zeta.reciprocal()?;
    let ratio = zeta_prime.mul(&inv_zeta).normalize(); // ζ'/ζ = -1/x + Σ a_n x^n
    let log_dd = ratio.differentiate(); // (log ζ)'' = x^-2 (1 + A)
    let shifted = log_dd.shift(2);
    let a = shifted.sub(&TruncatedSeries::one(shifted.order_cap()));
    debug_assert!(a.coeff(0).is_zero(), "A(1) must vanish exactly");
    debug_assert!(a.coeff(1).is_zero(), "A'(1) must vanish exactly");
    Ok(a)
}

/// Numeric A(s) from a Stieltjes table.
pub fn derive_a_series(
    stieltjes: &StieltjesTable,
    order_cap: usize,
) -> Result<TruncatedSeries<f64>> {
    derive_a_series_generic(&stieltjes.values, order_cap)
}

/// Expansion data: E N(T, ∞) = (1/2π) log(1/(T-1/2))
/// + c_0 + Σ_{n>=2} c_n (T-1/2)^n.
#[derive(Debug, Clone)]
pub struct ExpansionCoefficients {
    /// Calibrated additive constant; None until expected-zeros pins it.
    pub c0: Option<f64>,
    /// Highest retained order M.
    pub order: usize,
    /// Numeric c_2 ..= c_M (the 1/π factor included).
    pub cn: Vec<f64>,
    /// Exact skeletons p_n with c_n = p_n / π, polynomials in γ_0, γ_1, ...
    pub pn_symbolic: Vec<GammaPoly>,
}

impl ExpansionCoefficients {
    pub fn c(&self, n: usize) -> f64 {
        assert!((2..=self.order).contains(&n));
        self.cn[n - 2]
    }

    /// Σ_{n=2..=M} c_n x^n.
    pub fn series_sum(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for n in (2..=self.order).rev() {
            acc = (acc + self.c(n)) * x;
        }
        acc * x
    }
}

/// p_n coefficients (c_n = p_n/π) from √(1+A) = 1 + Σ b_n (s-1)^n:
/// substituting s = 2σ and integrating (1/π)·(2σ-1)^-1 √(1+A(2σ)) term by
/// term gives c_n = -b_n 2^(n-1) / (π n).
pub fn derive_expansion_coefficients_generic<C: Coeff>(
    a: &TruncatedSeries<C>,
    m: usize,
) -> Result<Vec<C>> {
    if (m as isize) > a.order_cap() {
        return Err(Error::domain(format!(
            "requested order {m} exceeds A's order_cap {}",
            a.order_cap()
        )));
    }
    let one = TruncatedSeries::one(a.order_cap());
    let b = one.add(a).sqrt()?;
    debug_assert!(b.coeff(1).is_zero(), "b-series starts at n = 2");
    let mut out = Vec::with_capacity(m.saturating_sub(1));
    for n in 2..=m {
        let scale = C::from_ratio(-(1i64 << (n - 1)), n as i64);
        out.push(b.coeff(n as isize).mul(&scale));
    }
    Ok(out)
}

/// Numeric + symbolic expansion coefficients from a numeric A series. The
/// symbolic skeletons are derived through the identical pipeline over
/// polynomials in the Stieltjes constants.
pub fn derive_expansion_coefficients(
    a: &TruncatedSeries<f64>,
    m: usize,
) -> Result<ExpansionCoefficients> {
    let pn_over_pi = derive_expansion_coefficients_generic(a, m)?;
    let gamma_vars: Vec<GammaPoly> = (0..=m).map(GammaPoly::gamma).collect();
    let a_sym = derive_a_series_generic(&gamma_vars, m)?;
    let pn_symbolic = derive_expansion_coefficients_generic(&a_sym, m)?;
    Ok(ExpansionCoefficients {
        c0: None,
        order: m,
        cn: pn_over_pi
            .iter()
            .map(|p| p / std::f64::consts::PI)
            .collect(),
        pn_symbolic,
    })
}

/// Default expansion order; the remainder is O((T-1/2)^2), so ten terms
/// is far past desk-scale needs.
pub const DEFAULT_EXPANSION_ORDER: usize = 10;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zeta::{cached_stieltjes, log_zeta_second_derivative};
    use proptest::prelude::*;

    fn poly(coeffs: &[f64]) -> TruncatedSeries<f64> {
        TruncatedSeries::new(0, coeffs.len() as isize - 1, coeffs.to_vec())
    }

    #[test]
    fn mul_basic_identity() {
        let a = poly(&[1.0, 1.0, 0.0]); // 1 + x, cap 2
        let b = poly(&[1.0, -1.0, 0.0]); // 1 - x, cap 2
        let c = a.mul(&b);
        assert_eq!(c.order_cap(), 2);
        assert_eq!(c.coeff(0), 1.0);
        assert_eq!(c.coeff(1), 0.0);
        assert_eq!(c.coeff(2), -1.0);
    }

    #[test]
    fn mul_truncation_rule() {
        let a = poly(&[1.0, 1.0, 1.0, 1.0]); // cap 3
        let b = poly(&[1.0, 1.0, 1.0, 1.0, 1.0, 1.0]); // cap 5
        assert_eq!(a.mul(&b).order_cap(), 3);
    }

    #[test]
    fn reciprocal_geometric() {
        let a = poly(&[1.0, -1.0, 0.0, 0.0, 0.0]); // 1 - x
        let r = a.reciprocal().unwrap();
        for p in 0..=4 {
            assert_eq!(r.coeff(p), 1.0, "geometric coefficient at {p}");
        }
    }

    #[test]
    fn reciprocal_of_zero_leading_coefficient_degenerates() {
        let z = TruncatedSeries::<f64>::zero(3);
        assert!(matches!(z.reciprocal(), Err(Error::Degeneracy(_))));
    }

    #[test]
    fn reciprocal_times_self_is_one_rational() {
        // exact over the rationals
        let coeffs: Vec<BigRational> = [1, 3, -2, 5, 7]
            .iter()
            .map(|&n| BigRational::from_integer(BigInt::from(n)))
            .collect();
        let a = TruncatedSeries::new(0, 4, coeffs);
        let r = a.reciprocal().unwrap();
        let prod = a.mul(&r);
        assert_eq!(prod.coeff(0), rat_one());
        for p in 1..=prod.order_cap() {
            assert!(Coeff::is_zero(&prod.coeff(p)), "non-zero at {p}");
        }
    }

    #[test]
    fn compose_geometric() {
        let outer = poly(&[1.0, 1.0, 1.0, 1.0, 1.0]); // 1/(1-w) truncated
        let inner = poly(&[0.0, 1.0, 0.0, 0.0, 0.0]); // w = x
        let c = outer.compose(&inner).unwrap();
        for p in 0..=c.order_cap() {
            assert_eq!(c.coeff(p), 1.0);
        }
    }

    #[test]
    fn compose_sqrt_perfect_square() {
        // √(1+z) ∘ (2x + x²) = 1 + x exactly
        let cap = 6usize;
        let mut binom = vec![rat_one()];
        for n in 0..cap {
            let last = binom[n].clone();
            binom.push(
                last * BigRational::new(BigInt::from(1 - 2 * (n as i64)), BigInt::from(2 * (n as i64 + 1))),
            );
        }
        let outer = TruncatedSeries::new(0, cap as isize, binom);
        let mut inner_c = vec![rat_zero(); cap + 1];
        inner_c[1] = BigRational::from_integer(BigInt::from(2));
        inner_c[2] = rat_one();
        let inner = TruncatedSeries::new(0, cap as isize, inner_c);
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.coeff(0), rat_one());
        assert_eq!(c.coeff(1), rat_one());
        for p in 2..=c.order_cap() {
            assert!(Coeff::is_zero(&c.coeff(p)), "non-zero at {p}");
        }
    }

    #[test]
    fn compose_exp_log_is_identity() {
        // exp ∘ log(1+x) = 1 + x, exact rational coefficients
        let cap = 7usize;
        let mut exp_c = vec![rat_one()];
        let mut fact = BigInt::one();
        for n in 1..=cap {
            fact *= n;
            exp_c.push(BigRational::new(BigInt::one(), fact.clone()));
        }
        let exp_series = TruncatedSeries::new(0, cap as isize, exp_c);
        let mut log_c = vec![rat_zero()];
        for n in 1..=cap {
            let sign = if n % 2 == 1 { 1 } else { -1 };
            log_c.push(BigRational::new(BigInt::from(sign), BigInt::from(n)));
        }
        let log_series = TruncatedSeries::new(0, cap as isize, log_c);
        let c = exp_series.compose(&log_series).unwrap();
        assert_eq!(c.coeff(0), rat_one());
        assert_eq!(c.coeff(1), rat_one());
        for p in 2..=c.order_cap() {
            assert!(Coeff::is_zero(&c.coeff(p)), "exp∘log non-zero at {p}");
        }
    }

    #[test]
    fn compose_rejects_nonzero_constant_inner() {
        let outer = poly(&[1.0, 1.0]);
        let inner = poly(&[0.5, 1.0]);
        assert!(matches!(outer.compose(&inner), Err(Error::Domain(_))));
    }

    #[test]
    fn sqrt_examples() {
        let s = poly(&[1.0, 2.0, 1.0]).sqrt().unwrap();
        assert_eq!((s.coeff(0), s.coeff(1), s.coeff(2)), (1.0, 1.0, 0.0));

        let id = poly(&[1.0]).sqrt().unwrap();
        assert_eq!(id.coeff(0), 1.0);

        // binomial series of √(1+x): 1, 1/2, -1/8, 1/16
        let b = poly(&[1.0, 1.0, 0.0, 0.0]).sqrt().unwrap();
        assert_eq!(b.coeff(0), 1.0);
        assert_eq!(b.coeff(1), 0.5);
        assert_eq!(b.coeff(2), -0.125);
        assert_eq!(b.coeff(3), 0.0625);
    }

    #[test]
    fn sqrt_rejects_non_unit_constant() {
        assert!(matches!(poly(&[4.0, 1.0]).sqrt(), Err(Error::Domain(_))));
    }

    proptest! {
        #[test]
        fn prop_sqrt_squares_back(raw in proptest::collection::vec(-9i64..=9, 1..6)) {
            let mut coeffs = vec![rat_one()];
            coeffs.extend(raw.iter().map(|&n| BigRational::new(BigInt::from(n), BigInt::from(4))));
            let a = TruncatedSeries::new(0, coeffs.len() as isize - 1, coeffs);
            let s = a.sqrt().unwrap();
            let sq = s.mul(&s);
            for p in 0..=sq.order_cap() {
                prop_assert_eq!(sq.coeff(p), a.coeff(p));
            }
        }

        #[test]
        fn prop_reciprocal_inverts(raw in proptest::collection::vec(-9i64..=9, 1..6), lead in 1i64..=5) {
            let mut coeffs = vec![BigRational::from_integer(BigInt::from(lead))];
            coeffs.extend(raw.iter().map(|&n| BigRational::from_integer(BigInt::from(n))));
            let a = TruncatedSeries::new(0, coeffs.len() as isize - 1, coeffs);
            let r = a.reciprocal().unwrap();
            let prod = a.mul(&r);
            prop_assert_eq!(prod.coeff(0), rat_one());
            for p in 1..=prod.order_cap() {
                prop_assert!(Coeff::is_zero(&prod.coeff(p)));
            }
        }
    }

    #[test]
    fn a_series_first_two_coefficients_vanish() {
        let a = derive_a_series(cached_stieltjes(), 10).unwrap();
        assert_eq!(a.coeff(0), 0.0);
        assert_eq!(a.coeff(1), 0.0);
    }

    #[test]
    fn a_series_quadratic_term_matches_finite_difference() {
        // oracle: A(1+h) = h²(log ζ)''(1+h) - 1, Richardson-extrapolated in h
        let a = derive_a_series(cached_stieltjes(), 10).unwrap();
        let g = |h: f64| h * h * log_zeta_second_derivative(1.0 + h).unwrap() - 1.0;
        let a_of = |h: f64| g(h) / (h * h);
        let (h1, h2) = (1e-2, 5e-3);
        let extrap = 2.0 * a_of(h2) - a_of(h1);
        assert!(
            (a.coeff(2) - extrap).abs() < 1e-5,
            "A2 = {}, finite-difference oracle = {extrap}",
            a.coeff(2)
        );
    }

    #[test]
    fn a_series_reproduces_log_zeta_dd_near_pole() {
        let a = derive_a_series(cached_stieltjes(), 10).unwrap();
        let mut x = 1e-4; // x = σ - 1/2
        while x <= 1e-2 {
            let sigma = 0.5 + x;
            let series = (1.0 + a.evaluate(2.0 * sigma - 1.0)) / ((2.0 * sigma - 1.0) as f64).powi(2);
            let direct = log_zeta_second_derivative(2.0 * sigma).unwrap();
            assert!(
                (series - direct).abs() < 1e-6,
                "x={x}: series {series} vs direct {direct}"
            );
            x *= 3.1623;
        }
    }

    #[test]
    fn c2_symbolic_identity() {
        // p_2 = γ_1 + γ_0²/2, i.e. c_2 = (2γ_1 + γ_0²)/(2π)
        let gamma_vars: Vec<GammaPoly> = (0..=10).map(GammaPoly::gamma).collect();
        let a = derive_a_series_generic(&gamma_vars, 10).unwrap();
        let pn = derive_expansion_coefficients_generic(&a, 10).unwrap();
        let expected = GammaPoly::gamma(1).add(
            &GammaPoly::gamma(0)
                .mul(&GammaPoly::gamma(0))
                .mul(&GammaPoly::from_ratio(1, 2)),
        );
        assert_eq!(pn[0], expected);
        assert_eq!(pn[0].format_over_pi(), "(2*g1 + g0^2)/(2*pi)");
    }

    #[test]
    fn c2_numeric_value() {
        let a = derive_a_series(cached_stieltjes(), 10).unwrap();
        let coeffs = derive_expansion_coefficients(&a, 10).unwrap();
        assert!((coeffs.c(2) - 0.0298489).abs() < 1e-6);
        // symbolic skeleton evaluated at the cached table agrees to fp noise
        let sym = coeffs.pn_symbolic[0].eval(&cached_stieltjes().values) / std::f64::consts::PI;
        assert!((coeffs.c(2) - sym).abs() < 1e-15);
    }

    #[test]
    fn b_series_has_no_linear_term() {
        let a = derive_a_series(cached_stieltjes(), 10).unwrap();
        let b = TruncatedSeries::one(a.order_cap()).add(&a).sqrt().unwrap();
        assert_eq!(b.coeff(1), 0.0);
    }

    #[test]
    fn expansion_partial_sums_converge_at_declared_order() {
        // partial sums at order M vs M+2 differ by O(x^(M+1))
        let a = derive_a_series(cached_stieltjes(), 10).unwrap();
        let c6 = derive_expansion_coefficients(&a, 6).unwrap();
        let c8 = derive_expansion_coefficients(&a, 8).unwrap();
        for &x in &[1e-2f64, 5e-3, 1e-3] {
            let diff = (c6.series_sum(x) - c8.series_sum(x)).abs();
            // analytic gap plus Horner rounding at the c_2 x² scale
            let budget = (c8.c(7).abs() + c8.c(8).abs() * x) * x.powi(7) * 1.0001
                + 1e-15 * c8.c(2).abs() * x * x;
            assert!(diff <= budget, "x={x}: diff {diff} > budget {budget}");
        }
    }

    #[test]
    fn order_above_cap_is_domain_error() {
        let a = derive_a_series(cached_stieltjes(), 6).unwrap();
        assert!(matches!(
            derive_expansion_coefficients_generic(&a, 12),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn insufficient_stieltjes_entries_is_precision_error() {
        let short = crate::zeta::stieltjes_constants(3, 1e-10).unwrap();
        assert!(matches!(
            derive_a_series(&short, 10),
            Err(Error::Precision(_))
        ));
    }
}
