//! Compensated floating-point accumulation.
//!
//! The axiom residual tolerances sit at 1e-10 and below, which naive
//! left-to-right summation does not reliably deliver once sums mix terms of
//! very different magnitude. Everything here assumes finite terms; infinity
//! handling is the caller's job.

/// Neumaier's variant of Kahan summation: a running sum plus an error term,
/// robust to addends larger than the accumulated sum.
#[derive(Debug, Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of an iterator, left to right.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Error-free sum: returns `(s, e)` with `s = fl(a + b)` and `a + b = s + e`
/// exactly.
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let ap = s - b;
    let bp = s - ap;
    (s, (a - ap) + (b - bp))
}

/// Error-free product via FMA: returns `(p, e)` with `a * b = p + e` exactly.
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// A double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Only the handful of operations the identity tests need: the point is to
/// evaluate an algebraic combination of f64 inputs without the combination
/// itself adding rounding noise at the residual scale being measured.
#[derive(Debug, Clone, Copy)]
pub struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact product of two f64 values.
    pub fn product(a: f64, b: f64) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let lo = self.lo + e;
        let (hi, lo) = fast_two_sum(s, lo);
        Self { hi, lo }
    }

    pub fn mul_f64(self, x: f64) -> Self {
        let (p, e) = two_prod(self.hi, x);
        let e = self.lo.mul_add(x, e);
        let (hi, lo) = fast_two_sum(p, e);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// Requires `|a| >= |b|` (or a == 0); one branch cheaper than `two_sum`.
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn neumaier_recovers_cancelled_tail() {
        let mut s = NeumaierSum::new();
        s.add(1e16);
        s.add(1.0);
        s.add(-1e16);
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn two_sum_is_exact() {
        let (s, e) = two_sum(1e16, 1.0);
        assert_eq!(s + e, 1e16 + 1.0);
        assert_eq!(e, 1.0 - ((1e16 + 1.0) - 1e16));
    }

    #[test]
    fn two_prod_captures_rounding() {
        let a = 1.0 + 2f64.powi(-30);
        let b = 1.0 + 2f64.powi(-29);
        let (p, e) = two_prod(a, b);
        // a*b = 1 + 2^-29 + 2^-30 + 2^-59; the 2^-59 tail lands in e.
        assert_ne!(e, 0.0);
        assert_eq!(p, a * b);
    }

    #[test]
    fn double_double_combination() {
        // a + b - 2ab with the huge parts of a and -2ab annihilating. Both
        // inputs are exactly representable, so the expected value is the
        // exact rational (2^41 - 10^12) / 2^42.
        let a = -499_999_999_999.5f64;
        let b = 0.5f64 - 2f64.powi(-42);
        let dd = DoubleDouble::product(a, b)
            .mul_f64(-2.0)
            .add_f64(a)
            .add_f64(b);
        let exact = (2f64.powi(41) - 1e12) / 2f64.powi(42);
        assert_eq!(dd.to_f64(), exact);
        // Plain f64 evaluation loses ~ulp(5e11) here.
        let plain = a + b + (-2.0) * a * b;
        assert!((plain - exact).abs() > 1e-6);
    }
}
