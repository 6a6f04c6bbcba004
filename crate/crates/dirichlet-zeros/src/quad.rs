//! Adaptive quadrature: interval-halving Simpson with error by comparison
//! against the two-panel refinement.

use crate::error::{Error, Result};

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Accumulated error estimate; for infinite upper limits the certified
    /// far-tail bound is folded in by the caller.
    pub abs_err_estimate: f64,
    /// Number of interval halvings performed.
    pub subdivisions: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            abs_err_estimate: 0.0,
            subdivisions: 0,
        }
    }

    pub fn combine(self, other: QuadratureResult) -> Self {
        QuadratureResult {
            value: self.value + other.value,
            abs_err_estimate: self.abs_err_estimate + other.abs_err_estimate,
            subdivisions: self.subdivisions + other.subdivisions,
        }
    }
}

const MAX_SUBDIVISIONS: usize = 2_000_000;

struct Panel {
    a: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    b: f64,
    simpson: f64,
}

/// ∫_a^b f, requiring total error <= tol. The integrand may fail (domain or
/// precision); failures propagate.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(tol > 0.0) {
        return Err(Error::domain("quadrature tolerance must be positive".to_string()));
    }
    if a == b {
        return Ok(QuadratureResult::zero());
    }
    if !(a < b) {
        return Err(Error::domain(format!("bad quadrature interval [{a}, {b}]")));
    }
    let total_len = b - a;
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let root = Panel {
        a,
        fa,
        fm,
        fb,
        b,
        simpson: (b - a) / 6.0 * (fa + 4.0 * fm + fb),
    };

    let mut stack = vec![root];
    let mut value = 0.0;
    let mut err_acc = 0.0;
    let mut subdivisions = 0usize;

    while let Some(p) = stack.pop() {
        let len = p.b - p.a;
        let ml = 0.5 * (p.a + (p.a + p.b) * 0.5);
        let mr = 0.5 * ((p.a + p.b) * 0.5 + p.b);
        let mid = 0.5 * (p.a + p.b);
        let (fml, fmr) = (f(ml)?, f(mr)?);
        let s_left = len / 12.0 * (p.fa + 4.0 * fml + p.fm);
        let s_right = len / 12.0 * (p.fm + 4.0 * fmr + p.fb);
        let s2 = s_left + s_right;
        let err = (s2 - p.simpson).abs() / 15.0;
        let local_tol = tol * (len / total_len).max(f64::MIN_POSITIVE);
        // stop refining when the panel meets its share of the budget or is
        // too thin for f64 to subdivide further
        if err <= local_tol || len <= 8.0 * f64::EPSILON * mid.abs().max(1e-30) {
            value += s2 + (s2 - p.simpson) / 15.0;
            err_acc += err;
            continue;
        }
        subdivisions += 1;
        if subdivisions > MAX_SUBDIVISIONS {
            return Err(Error::precision(format!(
                "quadrature tolerance {tol:.3e} unreachable within {MAX_SUBDIVISIONS} subdivisions"
            )));
        }
        stack.push(Panel {
            a: p.a,
            fa: p.fa,
            fm: fml,
            fb: p.fm,
            b: mid,
            simpson: s_left,
        });
        stack.push(Panel {
            a: mid,
            fa: p.fm,
            fm: fmr,
            fb: p.fb,
            b: p.b,
            simpson: s_right,
        });
    }

    Ok(QuadratureResult {
        value,
        abs_err_estimate: err_acc,
        subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exactish() {
        let q = integrate(|x| Ok(x * x * x - 2.0 * x + 1.0), 0.0, 2.0, 1e-12).unwrap();
        // ∫ = 4 - 4 + 2 = 2
        assert!((q.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn oscillatory_integrand() {
        let q = integrate(|x| Ok((10.0 * x).sin()), 0.0, std::f64::consts::PI, 1e-10).unwrap();
        let exact = (1.0 - (10.0 * std::f64::consts::PI).cos()) / 10.0;
        assert!((q.value - exact).abs() < 1e-9);
        assert!(q.abs_err_estimate >= 0.0);
    }

    #[test]
    fn empty_interval_is_zero() {
        let q = integrate(|_| Ok(1.0), 1.0, 1.0, 1e-10).unwrap();
        assert_eq!(q.value, 0.0);
        assert_eq!(q.subdivisions, 0);
    }

    #[test]
    fn integrand_errors_propagate() {
        let r = integrate(
            |x| {
                if x > 0.5 {
                    Err(Error::domain("boom".to_string()))
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
            1e-8,
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }
}
