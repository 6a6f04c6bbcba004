//! Small numeric helpers: compensated summation and a minimal
//! double-double type used where plain f64 accumulation would lose
//! digits to cancellation (Stieltjes constants).

/// Neumaier (improved Kahan) accumulator.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Double-double value `hi + lo` with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

// f64::mul_add is correctly rounded, so the residual is exact.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn add_f64(self, x: f64) -> Dd {
        let (s, e) = two_sum(self.hi, x);
        let e = e + self.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, d: f64) -> Dd {
        let q0 = self.hi / d;
        let (p, e) = two_prod(q0, d);
        let r = (self.hi - p) + (self.lo - e);
        let q1 = r / d;
        let (hi, lo) = quick_two_sum(q0, q1);
        Dd { hi, lo }
    }

    /// Integer power by repeated multiplication (exponents stay tiny here).
    pub fn powi(self, n: usize) -> Dd {
        let mut acc = Dd::from_f64(1.0);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// ln p for primes < 64 in double-double precision.
#[allow(clippy::approx_constant)] // hi/lo pairs, exact by construction
const LN_PRIME: [(u32, f64, f64); 18] = [
    (2, 0.6931471805599453, 2.3190468138462996e-17),
    (3, 1.0986122886681098, -9.07129723500153e-17),
    (5, 1.6094379124341003, 9.280081691085902e-17),
    (7, 1.9459101490553132, 7.323586207904907e-17),
    (11, 2.3978952727983707, -1.253584211423161e-16),
    (13, 2.5649493574615367, -2.5580975097208856e-18),
    (17, 2.833213344056216, -8.500696635386325e-17),
    (19, 2.9444389791664403, 1.9776172119535626e-16),
    (23, 3.1354942159291497, 1.5758359867283186e-17),
    (29, 3.367295829986474, -1.1553104240685565e-16),
    (31, 3.4339872044851463, -2.5863763694297672e-17),
    (37, 3.6109179126442243, 9.643918385970854e-17),
    (41, 3.713572066704308, -1.4628004942704776e-16),
    (43, 3.7612001156935624, 3.879508085699725e-17),
    (47, 3.8501476017100584, 1.5534199491592608e-16),
    (53, 3.970291913552122, -1.3098078310631424e-16),
    (59, 4.07753744390572, -2.5451232614395796e-16),
    (61, 4.110873864173311, -1.0515756814070423e-16),
];

/// ln k to double-double accuracy for 1 <= k < 64, assembled from the
/// prime table so the result is good to ~1e-32 relative.
pub(crate) fn ln_dd(k: u32) -> Dd {
    assert!(k >= 1 && k < 64, "ln_dd table covers 1..64 only");
    let mut rest = k;
    let mut acc = Dd::ZERO;
    for &(p, hi, lo) in &LN_PRIME {
        while rest % p == 0 {
            rest /= p;
            acc = acc.add(Dd::new(hi, lo));
        }
        if rest == 1 {
            break;
        }
    }
    debug_assert_eq!(rest, 1);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancellation() {
        let mut acc = Accumulator::new();
        acc.add(1.0);
        acc.add(1e100);
        acc.add(1.0);
        acc.add(-1e100);
        assert_eq!(acc.value(), 2.0);
    }

    #[test]
    fn dd_ln_matches_f64() {
        for k in 1..64u32 {
            let d = ln_dd(k);
            assert!((d.to_f64() - (k as f64).ln()).abs() <= 1e-15 * (k as f64).ln().max(1.0));
        }
    }

    #[test]
    fn dd_mul_div_roundtrip() {
        let x = Dd::new(std::f64::consts::PI, 1.2246467991473532e-16);
        let y = x.mul(Dd::from_f64(7.0)).div_f64(7.0);
        assert!((y.hi - x.hi).abs() < 1e-300);
        assert!((y.lo - x.lo).abs() < 1e-16 * x.hi.abs());
    }
}
